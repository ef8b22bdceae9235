//! Share reconstruction: converts token-denominated transfers from the era
//! before the share-transfer event existed into share units, and merges
//! them with native share records into one canonical ledger.

use rayon::prelude::*;

use crate::amount::{decimal_ratio_string, TokenAmount};
use crate::error::{LedgerError, ReconstructError};
use crate::ledger::{BlockHeight, Denomination, LidoStateSnapshot, TransferRecord};
use crate::state::StateSeries;

/// Where a share record came from: emitted by the contract as-is, or
/// derived here from a token-denominated event.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Provenance {
    NativeEvent,
    Reconstructed,
}

impl Provenance {
    pub fn as_str(&self) -> &'static str {
        match self {
            Provenance::NativeEvent => "native",
            Provenance::Reconstructed => "reconstructed",
        }
    }
}

/// floor(amount * total_shares / total_pooled_ether), the contract's
/// token-to-share conversion at one snapshot.
pub fn tokens_to_shares(
    amount: TokenAmount,
    s: &LidoStateSnapshot,
) -> Result<TokenAmount, LedgerError> {
    let pooled = s.total_pooled_ether()?;
    if pooled.is_zero() {
        return Err(LedgerError::ZeroPool(s.block.0));
    }
    amount
        .mul_div_floor(s.total_shares, pooled)
        .ok_or(LedgerError::Overflow("tokens_to_shares"))
}

/// floor(shares * total_pooled_ether / total_shares), the inverse
/// conversion (a token balance is this applied to a share balance).
pub fn shares_to_tokens(
    shares: TokenAmount,
    s: &LidoStateSnapshot,
) -> Result<TokenAmount, LedgerError> {
    if s.total_shares.is_zero() {
        return Err(LedgerError::ZeroShares(s.block.0));
    }
    let pooled = s.total_pooled_ether()?;
    shares
        .mul_div_floor(pooled, s.total_shares)
        .ok_or(LedgerError::Overflow("shares_to_tokens"))
}

/// The canonical share-denominated transfer history. Records are sorted by
/// (block, log_index); `provenance` runs parallel to `records`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ShareLedger {
    records: Vec<TransferRecord>,
    provenance: Vec<Provenance>,
    cutover: Option<BlockHeight>,
}

impl ShareLedger {
    /// Wraps an already share-denominated history (e.g. a non-rebasing
    /// wrapper token, or a post-cutover-only extract). Everything is
    /// native by construction.
    pub fn from_native(records: Vec<TransferRecord>) -> Result<Self, ReconstructError> {
        validate_input(&records, "share", Denomination::Shares)?;
        let cutover = records.first().map(|r| r.block);
        let provenance = vec![Provenance::NativeEvent; records.len()];
        Ok(ShareLedger {
            records,
            provenance,
            cutover,
        })
    }

    pub fn records(&self) -> &[TransferRecord] {
        &self.records
    }

    pub fn provenance(&self) -> &[Provenance] {
        &self.provenance
    }

    /// First block carrying a native share event; records before it are
    /// reconstructed. None when the whole ledger is reconstructed.
    pub fn cutover_block(&self) -> Option<BlockHeight> {
        self.cutover
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&TransferRecord, Provenance)> {
        self.records.iter().zip(self.provenance.iter().copied())
    }
}

fn validate_input(
    records: &[TransferRecord],
    input: &'static str,
    want: Denomination,
) -> Result<(), ReconstructError> {
    for rec in records {
        if rec.denomination != want {
            return Err(ReconstructError::WrongDenomination {
                input,
                block: rec.block.0,
                log_index: rec.log_index,
            });
        }
    }
    if let Some(w) = records.windows(2).find(|w| w[0].key() >= w[1].key()) {
        let (prev_block, prev_log) = w[0].key();
        let (block, log_index) = w[1].key();
        return Err(ReconstructError::UnorderedInput {
            input,
            prev_block,
            prev_log,
            block,
            log_index,
        });
    }
    Ok(())
}

fn convert_one(
    rec: &TransferRecord,
    states: &StateSeries,
) -> Result<TransferRecord, ReconstructError> {
    let snap = states
        .at(rec.block)
        .ok_or(ReconstructError::MissingState(rec.block.0))?;
    let shares = match tokens_to_shares(rec.value, snap) {
        Ok(v) => v,
        Err(LedgerError::ZeroPool(_)) => {
            return Err(ReconstructError::ZeroPoolAtTransfer(rec.block.0))
        }
        Err(e) => return Err(e.into()),
    };
    Ok(TransferRecord {
        value: shares,
        denomination: Denomination::Shares,
        ..*rec
    })
}

/// Builds the canonical share ledger. Token records strictly before the
/// first native record's block are converted through the per-block state;
/// from that block on the native records stand alone and the (redundant)
/// token duplicates are dropped. `shards` only controls how the conversion
/// work is chunked; the output is identical for every value.
pub fn reconstruct(
    token_transfers: &[TransferRecord],
    native_share_transfers: &[TransferRecord],
    states: &StateSeries,
    shards: usize,
) -> Result<ShareLedger, ReconstructError> {
    validate_input(token_transfers, "token", Denomination::Tokens)?;
    validate_input(native_share_transfers, "share", Denomination::Shares)?;

    let cutover = native_share_transfers.first().map(|r| r.block);
    let pre: &[TransferRecord] = match cutover {
        Some(c) => {
            let end = token_transfers.partition_point(|r| r.block < c);
            &token_transfers[..end]
        }
        None => token_transfers,
    };

    let chunk = pre.len().div_ceil(shards.max(1)).max(1);
    let converted: Vec<Result<Vec<TransferRecord>, ReconstructError>> = pre
        .par_chunks(chunk)
        .map(|c| c.iter().map(|r| convert_one(r, states)).collect())
        .collect();

    let mut records = Vec::with_capacity(pre.len() + native_share_transfers.len());
    for part in converted {
        records.extend(part?);
    }
    let reconstructed = records.len();
    records.extend_from_slice(native_share_transfers);

    let mut provenance = vec![Provenance::Reconstructed; reconstructed];
    provenance.resize(records.len(), Provenance::NativeEvent);

    Ok(ShareLedger {
        records,
        provenance,
        cutover,
    })
}

/// One row of the supply/rate export: raw snapshot values plus the
/// shares-per-pooled-ether rate rendered as an exact decimal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SupplyPoint {
    pub block: BlockHeight,
    pub total_shares: TokenAmount,
    pub total_pooled_ether: TokenAmount,
    pub conversion_rate: String,
}

/// Number of significant digits in rendered conversion rates.
pub const RATE_SIG_DIGITS: usize = 18;

/// Samples (total_shares, total_pooled_ether, shares/pooled rate) at the
/// given blocks. With an empty sample list, samples every snapshot block
/// inside the ledger's span (or all snapshots when the ledger is empty).
pub fn supply_series(
    states: &StateSeries,
    ledger: &ShareLedger,
    sample_blocks: &[BlockHeight],
) -> Result<Vec<SupplyPoint>, ReconstructError> {
    let defaults: Vec<BlockHeight>;
    let samples: &[BlockHeight] = if sample_blocks.is_empty() {
        let lo = ledger.records().first().map(|r| r.block);
        let hi = ledger.records().last().map(|r| r.block);
        defaults = states
            .snapshots()
            .iter()
            .map(|s| s.block)
            .filter(|b| match (lo, hi) {
                (Some(lo), Some(hi)) => *b >= lo && *b <= hi,
                _ => true,
            })
            .collect();
        &defaults
    } else {
        sample_blocks
    };

    let mut out = Vec::with_capacity(samples.len());
    for &b in samples {
        let snap = states.at(b).ok_or(ReconstructError::MissingState(b.0))?;
        let pooled = snap.total_pooled_ether()?;
        if pooled.is_zero() {
            return Err(LedgerError::ZeroPool(b.0).into());
        }
        out.push(SupplyPoint {
            block: b,
            total_shares: snap.total_shares,
            total_pooled_ether: pooled,
            conversion_rate: decimal_ratio_string(snap.total_shares, pooled, RATE_SIG_DIGITS),
        });
    }
    Ok(out)
}
