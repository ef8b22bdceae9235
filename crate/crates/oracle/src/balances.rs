//! Brute-force balance reference.
//!
//! Deliberately naive and textually independent of the replay engine: one
//! linear pass summing inflows minus outflows per account in arbitrary
//! precision. Engine values are only touched at the boundary, as big-endian
//! bytes, so no engine arithmetic can leak into the reference result.

use microvel_core::{AccountId, TokenAmount, TransferRecord, ZERO_ADDRESS};
use num_bigint::BigUint;
use std::collections::BTreeMap;

fn big(value: TokenAmount) -> BigUint {
    BigUint::from_bytes_be(&value.to_be_bytes())
}

fn unbig(value: &BigUint) -> TokenAmount {
    let bytes = value.to_bytes_be();
    assert!(bytes.len() <= 32, "reference balance exceeds 256 bits");
    let mut word = [0u8; 32];
    word[32 - bytes.len()..].copy_from_slice(&bytes);
    TokenAmount::from_be_bytes(word)
}

/// Every account's balance after applying records up to and including block
/// `t`, computed as plain inflow-minus-outflow sums. Accounts that were
/// touched but drained to zero are retained with a zero balance.
pub fn oracle_balances(records: &[TransferRecord], t: u64) -> BTreeMap<AccountId, TokenAmount> {
    let mut ledger: BTreeMap<AccountId, BigUint> = BTreeMap::new();
    for r in records.iter().take_while(|r| r.block.0 <= t) {
        if r.from == r.to || r.value.is_zero() {
            continue;
        }
        *ledger.entry(r.to).or_default() += big(r.value);
        if r.from != ZERO_ADDRESS {
            let held = ledger
                .get_mut(&r.from)
                .expect("reference ledger overdraft: unknown sender");
            assert!(
                *held >= big(r.value),
                "reference ledger overdraft at block {}",
                r.block.0
            );
            *held -= big(r.value);
        }
    }
    ledger.iter().map(|(a, v)| (*a, unbig(v))).collect()
}

/// Total ever minted (transfers out of the zero address) up to block `t`.
pub fn oracle_minted(records: &[TransferRecord], t: u64) -> TokenAmount {
    let mut total = BigUint::default();
    for r in records.iter().take_while(|r| r.block.0 <= t) {
        if r.from == ZERO_ADDRESS && r.to != ZERO_ADDRESS {
            total += big(r.value);
        }
    }
    unbig(&total)
}
