//! Core ledger domain types: blocks, transfer records and Lido contract
//! state snapshots, plus the derived quantities (total pooled ether,
//! share price) everything else consumes.

use std::fmt;

use crate::account::AccountId;
use crate::amount::{decimal_ratio_string, TokenAmount};
use crate::error::LedgerError;

/// Block number on the host chain.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct BlockHeight(pub u64);

impl fmt::Display for BlockHeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Debug for BlockHeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// Whether a record's value is denominated in rebasing tokens or in the
/// underlying shares.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash)]
pub enum Denomination {
    Tokens,
    Shares,
}

impl Denomination {
    pub fn as_str(&self) -> &'static str {
        match self {
            Denomination::Tokens => "tokens",
            Denomination::Shares => "shares",
        }
    }
}

impl std::str::FromStr for Denomination {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "tokens" | "token" => Ok(Denomination::Tokens),
            "shares" | "share" => Ok(Denomination::Shares),
            other => Err(format!("unknown denomination {other:?}")),
        }
    }
}

/// One token or share movement. `(block, log_index)` is the total order of
/// the ledger; `from == zero address` marks a mint.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct TransferRecord {
    pub block: BlockHeight,
    pub log_index: u64,
    pub from: AccountId,
    pub to: AccountId,
    pub value: TokenAmount,
    pub denomination: Denomination,
}

impl TransferRecord {
    pub fn key(&self) -> (u64, u64) {
        (self.block.0, self.log_index)
    }

    pub fn is_mint(&self) -> bool {
        self.from.is_zero()
    }
}

/// Checks strict (block, log_index) ordering. Returns the first offending
/// adjacent pair, if any.
pub fn first_order_violation(records: &[TransferRecord]) -> Option<((u64, u64), (u64, u64))> {
    records
        .windows(2)
        .find(|w| w[0].key() >= w[1].key())
        .map(|w| (w[0].key(), w[1].key()))
}

// 32 ETH in wei does not fit u64; keep the (whole-eth, wei-per-eth) factors.
pub const DEPOSIT_ETH_PER_VALIDATOR: u64 = 32;
pub const WEI_PER_ETH: u64 = 1_000_000_000_000_000_000;

/// Contract state observed at the end of one block: validator counters,
/// oracle-reported beacon balance, buffered ether and total shares.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct LidoStateSnapshot {
    pub block: BlockHeight,
    pub deposited_validators: u64,
    pub beacon_validators: u64,
    pub beacon_balance: TokenAmount,
    pub buffered_ether: TokenAmount,
    pub total_shares: TokenAmount,
}

impl LidoStateSnapshot {
    /// bufferedBalance + beaconBalance + transientBalance, where the
    /// transient part is (deposited - beacon) validators at 32 ETH each.
    pub fn total_pooled_ether(&self) -> Result<TokenAmount, LedgerError> {
        if self.deposited_validators < self.beacon_validators {
            return Err(LedgerError::InvalidSnapshot {
                block: self.block.0,
                deposited: self.deposited_validators,
                beacon: self.beacon_validators,
            });
        }
        let pending = self.deposited_validators - self.beacon_validators;
        let transient = TokenAmount::from_u64(pending)
            .checked_mul_u64(DEPOSIT_ETH_PER_VALIDATOR)
            .and_then(|v| v.checked_mul_u64(WEI_PER_ETH))
            .ok_or(LedgerError::Overflow("transient balance"))?;
        self.buffered_ether
            .checked_add(self.beacon_balance)
            .and_then(|v| v.checked_add(transient))
            .ok_or(LedgerError::Overflow("total pooled ether"))
    }

    /// Exact pooled-ether-per-share rational. Callers render to decimal only
    /// at output boundaries.
    pub fn share_price(&self) -> Result<Rational, LedgerError> {
        if self.total_shares.is_zero() {
            return Err(LedgerError::ZeroShares(self.block.0));
        }
        Ok(Rational {
            num: self.total_pooled_ether()?,
            den: self.total_shares,
        })
    }
}

/// An exact nonnegative rational with a nonzero denominator.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Rational {
    pub num: TokenAmount,
    pub den: TokenAmount,
}

impl Rational {
    /// Decimal rendering with at least `sig` significant digits.
    pub fn to_decimal_string(&self, sig: usize) -> String {
        decimal_ratio_string(self.num, self.den, sig)
    }

    pub fn to_f64(&self) -> f64 {
        self.num.to_f64() / self.den.to_f64()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn snap(dep: u64, beacon: u64, beacon_bal_eth: u64, buffered_eth: u64) -> LidoStateSnapshot {
        LidoStateSnapshot {
            block: BlockHeight(100),
            deposited_validators: dep,
            beacon_validators: beacon,
            beacon_balance: TokenAmount::from_whole_tokens(beacon_bal_eth),
            buffered_ether: TokenAmount::from_whole_tokens(buffered_eth),
            total_shares: TokenAmount::from_u64(1),
        }
    }

    #[test]
    fn pooled_ether_empty_protocol() {
        assert_eq!(
            snap(0, 0, 0, 0).total_pooled_ether().unwrap(),
            TokenAmount::ZERO
        );
    }

    #[test]
    fn pooled_ether_sums_three_parts() {
        // 5 buffered + 32 beacon + 1 pending validator * 32
        assert_eq!(
            snap(2, 1, 32, 5).total_pooled_ether().unwrap(),
            TokenAmount::from_whole_tokens(69)
        );
    }

    #[test]
    fn pooled_ether_transient_vanishes_when_counters_equal() {
        assert_eq!(
            snap(10, 10, 321, 0).total_pooled_ether().unwrap(),
            TokenAmount::from_whole_tokens(321)
        );
    }

    #[test]
    fn pooled_ether_rejects_counter_inversion() {
        assert!(matches!(
            snap(1, 2, 0, 0).total_pooled_ether(),
            Err(LedgerError::InvalidSnapshot { .. })
        ));
    }

    #[test]
    fn share_price_cases() {
        let mut s = snap(0, 0, 0, 0);
        s.buffered_ether = TokenAmount::from_u64(1000);
        s.total_shares = TokenAmount::from_u64(500);
        let p = s.share_price().unwrap();
        assert_eq!(p.to_decimal_string(18), "2");

        s.buffered_ether = TokenAmount::from_u64(500);
        assert_eq!(s.share_price().unwrap().to_decimal_string(18), "1");

        s.buffered_ether = TokenAmount::ZERO;
        s.total_shares = TokenAmount::from_u64(100);
        assert_eq!(s.share_price().unwrap().to_decimal_string(18), "0");

        s.total_shares = TokenAmount::ZERO;
        assert!(matches!(s.share_price(), Err(LedgerError::ZeroShares(_))));
    }

    #[test]
    fn record_ordering_check() {
        use crate::account::ZERO_ADDRESS;
        let rec = |b: u64, l: u64| TransferRecord {
            block: BlockHeight(b),
            log_index: l,
            from: ZERO_ADDRESS,
            to: AccountId::synthetic(0),
            value: TokenAmount::from_u64(1),
            denomination: Denomination::Shares,
        };
        assert!(first_order_violation(&[rec(1, 0), rec(1, 1), rec(2, 0)]).is_none());
        assert_eq!(
            first_order_violation(&[rec(1, 1), rec(1, 0)]),
            Some(((1, 1), (1, 0)))
        );
        assert_eq!(
            first_order_violation(&[rec(2, 0), rec(2, 0)]),
            Some(((2, 0), (2, 0)))
        );
    }
}
