//! Sequential ledger replay into per-account LIFO parcel stacks.
//!
//! A parcel is a chunk of balance tagged with the block it arrived in.
//! Spending consumes parcels newest-first, so the stack bottom carries the
//! oldest surviving acquisition — exactly the substrate holding-time
//! analysis needs.

use std::collections::BTreeMap;

use crate::account::AccountId;
use crate::amount::TokenAmount;
use crate::error::ReplayError;
use crate::ledger::{BlockHeight, TransferRecord};

/// A contiguously held chunk of balance acquired in one transfer.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Parcel {
    pub acquired: BlockHeight,
    pub amount: TokenAmount,
}

/// One account's holdings: parcels bottom-to-top in acquisition order plus
/// the cached total.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AccountState {
    parcels: Vec<Parcel>,
    balance: TokenAmount,
}

impl AccountState {
    pub fn balance(&self) -> TokenAmount {
        self.balance
    }

    /// Bottom-to-top (oldest acquisition first). The top is spent first.
    pub fn parcels(&self) -> &[Parcel] {
        &self.parcels
    }

    fn push(&mut self, acquired: BlockHeight, amount: TokenAmount) {
        debug_assert!(!amount.is_zero());
        self.parcels.push(Parcel { acquired, amount });
        self.balance = self
            .balance
            .checked_add(amount)
            .expect("balance bounded by total minted, which fits 256 bits");
    }

    /// Removes `amount` newest-first. Caller has already checked the
    /// balance covers it.
    fn consume(&mut self, amount: TokenAmount) {
        let mut remaining = amount;
        while !remaining.is_zero() {
            let top = self.parcels.last_mut().expect("balance covers amount");
            if top.amount <= remaining {
                remaining = remaining
                    .checked_sub(top.amount)
                    .expect("remaining >= top by branch");
                self.parcels.pop();
            } else {
                top.amount = top
                    .amount
                    .checked_sub(remaining)
                    .expect("top > remaining by branch");
                remaining = TokenAmount::ZERO;
            }
        }
        self.balance = self
            .balance
            .checked_sub(amount)
            .expect("caller checked balance");
    }
}

/// Full replay state: every account ever touched, in address order so that
/// iteration (and therefore every derived series) is deterministic.
#[derive(Clone, Debug, Default)]
pub struct Replay {
    accounts: BTreeMap<AccountId, AccountState>,
    cursor: Option<(u64, u64)>,
    minted: TokenAmount,
}

impl Replay {
    pub fn new() -> Self {
        Replay::default()
    }

    /// (block, log_index) of the last applied record.
    pub fn cursor(&self) -> Option<(u64, u64)> {
        self.cursor
    }

    /// Cumulative minted amount (transfers from the zero address).
    pub fn minted(&self) -> TokenAmount {
        self.minted
    }

    pub fn accounts(&self) -> &BTreeMap<AccountId, AccountState> {
        &self.accounts
    }

    pub fn account(&self, a: &AccountId) -> Option<&AccountState> {
        self.accounts.get(a)
    }

    /// Sum of every account balance, burn and zero addresses included.
    /// Always equals `minted()`: value never leaves the system.
    pub fn total_balance(&self) -> TokenAmount {
        let mut sum = TokenAmount::ZERO;
        for st in self.accounts.values() {
            sum = sum
                .checked_add(st.balance)
                .expect("bounded by total minted");
        }
        sum
    }

    /// Applies one record. Zero-value and self-transfers are no-ops; a
    /// transfer from the zero address mints; everything else moves parcels
    /// LIFO from sender to a single new parcel on the recipient.
    pub fn apply(&mut self, r: &TransferRecord) -> Result<(), ReplayError> {
        if let Some((pb, pl)) = self.cursor {
            if (pb, pl) >= r.key() {
                return Err(ReplayError::NonMonotonicBlock {
                    prev_block: pb,
                    prev_log: pl,
                    block: r.block.0,
                    log_index: r.log_index,
                });
            }
        }
        self.cursor = Some(r.key());

        if r.value.is_zero() || r.from == r.to {
            return Ok(());
        }

        if r.from.is_zero() {
            self.accounts.entry(r.to).or_default().push(r.block, r.value);
            self.minted = self
                .minted
                .checked_add(r.value)
                .expect("minted fits 256 bits");
            return Ok(());
        }

        let sender_balance = self
            .accounts
            .get(&r.from)
            .map(|s| s.balance)
            .unwrap_or(TokenAmount::ZERO);
        if sender_balance < r.value {
            return Err(ReplayError::InsufficientBalance {
                block: r.block.0,
                log_index: r.log_index,
                from: r.from.to_string(),
                balance: sender_balance.to_string(),
                value: r.value.to_string(),
            });
        }
        self.accounts
            .get_mut(&r.from)
            .expect("balance > 0 implies presence")
            .consume(r.value);
        self.accounts.entry(r.to).or_default().push(r.block, r.value);
        Ok(())
    }

    pub fn apply_all(&mut self, records: &[TransferRecord]) -> Result<(), ReplayError> {
        for r in records {
            self.apply(r)?;
        }
        Ok(())
    }
}
