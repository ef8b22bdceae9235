//! Step-function view over a sequence of contract state snapshots.

use crate::ledger::{BlockHeight, LidoStateSnapshot};

/// Snapshots sorted by block, deduplicated last-wins. Lookup at block `b`
/// returns the latest snapshot with `snapshot.block <= b` (end-of-block
/// semantics: a snapshot describes state after all of its block's
/// transactions have executed).
#[derive(Clone, Debug, Default)]
pub struct StateSeries {
    snaps: Vec<LidoStateSnapshot>,
}

impl StateSeries {
    pub fn new(mut snaps: Vec<LidoStateSnapshot>) -> Self {
        snaps.sort_by_key(|s| s.block);
        // Last entry for a block wins; keeps re-fetched corrections simple.
        snaps.dedup_by(|later, earlier| {
            if later.block == earlier.block {
                *earlier = *later;
                true
            } else {
                false
            }
        });
        StateSeries { snaps }
    }

    pub fn is_empty(&self) -> bool {
        self.snaps.is_empty()
    }

    pub fn len(&self) -> usize {
        self.snaps.len()
    }

    pub fn snapshots(&self) -> &[LidoStateSnapshot] {
        &self.snaps
    }

    pub fn first_block(&self) -> Option<BlockHeight> {
        self.snaps.first().map(|s| s.block)
    }

    pub fn last_block(&self) -> Option<BlockHeight> {
        self.snaps.last().map(|s| s.block)
    }

    /// Latest snapshot at or before `block`, or None if the series starts
    /// later.
    pub fn at(&self, block: BlockHeight) -> Option<&LidoStateSnapshot> {
        let idx = self.snaps.partition_point(|s| s.block <= block);
        idx.checked_sub(1).map(|i| &self.snaps[i])
    }
}
