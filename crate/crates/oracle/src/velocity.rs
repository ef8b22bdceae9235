//! Brute-force velocity reference.
//!
//! A from-scratch restatement of the spending rule and the turnover formula,
//! sharing no arithmetic with the engine: lots live in plain vectors of
//! arbitrary-precision integers, spends consume strictly from the newest lot
//! backwards, and each surviving lot of age τ (clamped to at least one block)
//! contributes its balance fraction divided by τ. Terms are divided in
//! floating point one lot at a time and combined with compensated summation,
//! so the reference is accurate to a few ulp — far inside the equivalence
//! tolerance it is used to enforce.

use microvel_core::{AccountId, ReplayError, TokenAmount, TransferRecord, BURNING_ADDRESS, ZERO_ADDRESS};
use num_bigint::BigUint;
use num_traits::ToPrimitive;
use std::collections::BTreeMap;

#[derive(Debug, Clone)]
struct Lot {
    acquired: u64,
    amount: BigUint,
}

fn big(value: TokenAmount) -> BigUint {
    BigUint::from_bytes_be(&value.to_be_bytes())
}

/// Replay every record up to and including block `t` into per-account lot
/// stacks, newest lot last, spending newest-first.
fn build_stacks(records: &[TransferRecord], t: u64) -> BTreeMap<AccountId, Vec<Lot>> {
    let mut stacks: BTreeMap<AccountId, Vec<Lot>> = BTreeMap::new();
    for r in records.iter().take_while(|r| r.block.0 <= t) {
        if r.from == r.to || r.value.is_zero() {
            continue;
        }
        if r.from != ZERO_ADDRESS {
            let stack = stacks
                .get_mut(&r.from)
                .expect("reference ledger overdraft: unknown sender");
            let mut need = big(r.value);
            while need > BigUint::default() {
                let newest = stack.last_mut().expect("reference ledger overdraft");
                if newest.amount > need {
                    newest.amount -= &need;
                    break;
                }
                need -= std::mem::take(&mut newest.amount);
                stack.pop();
            }
        }
        stacks.entry(r.to).or_default().push(Lot {
            acquired: r.block.0,
            amount: big(r.value),
        });
    }
    stacks
}

fn stack_balance(stack: &[Lot]) -> BigUint {
    stack.iter().map(|l| &l.amount).sum()
}

/// Neumaier-compensated sum of each lot's `amount / (money × τ)` term.
fn turnover(stack: &[Lot], money: &BigUint, t: u64) -> f64 {
    let mut sum = 0.0f64;
    let mut compensation = 0.0f64;
    for lot in stack {
        let age = (t - lot.acquired).max(1);
        let denominator = money * BigUint::from(age);
        let term = lot.amount.to_f64().expect("finite lot")
            / denominator.to_f64().expect("finite denominator");
        let fresh = sum + term;
        compensation += if sum.abs() >= term.abs() {
            (sum - fresh) + term
        } else {
            (term - fresh) + sum
        };
        sum = fresh;
    }
    sum + compensation
}

/// Reference per-account velocity at block `t`.
pub fn oracle_velocity(
    records: &[TransferRecord],
    account: &AccountId,
    t: u64,
) -> Result<f64, ReplayError> {
    let stacks = build_stacks(records, t);
    let stack = stacks
        .get(account)
        .filter(|s| !s.is_empty())
        .ok_or(ReplayError::EmptyAccount {
            account: *account,
            block: t,
        })?;
    let money = stack_balance(stack);
    if money == BigUint::default() {
        return Err(ReplayError::EmptyAccount {
            account: *account,
            block: t,
        });
    }
    Ok(turnover(stack, &money, t))
}

/// Reference aggregate velocity at block `t`: every holder's lots weighted
/// against the circulating total, with the zero and burning addresses left
/// out of both sides.
pub fn oracle_global_velocity(records: &[TransferRecord], t: u64) -> Result<f64, ReplayError> {
    let stacks = build_stacks(records, t);
    let circulating: BigUint = stacks
        .iter()
        .filter(|(a, _)| **a != ZERO_ADDRESS && **a != BURNING_ADDRESS)
        .map(|(_, s)| stack_balance(s))
        .sum();
    if circulating == BigUint::default() {
        return Err(ReplayError::ZeroSupply(t));
    }
    let mut sum = 0.0f64;
    let mut compensation = 0.0f64;
    for (_, stack) in stacks
        .iter()
        .filter(|(a, _)| **a != ZERO_ADDRESS && **a != BURNING_ADDRESS)
    {
        let term = turnover(stack, &circulating, t);
        let fresh = sum + term;
        compensation += if sum.abs() >= term.abs() {
            (sum - fresh) + term
        } else {
            (term - fresh) + sum
        };
        sum = fresh;
    }
    Ok(sum + compensation)
}

/// Every holder's reference velocity at block `t` from a single stack
/// build — the batch form of [`oracle_velocity`] for equivalence sweeps.
/// Zero/burning addresses and empty holders are omitted, mirroring which
/// accounts the engine reports.
pub fn oracle_account_velocities(
    records: &[TransferRecord],
    t: u64,
) -> BTreeMap<AccountId, f64> {
    let stacks = build_stacks(records, t);
    stacks
        .iter()
        .filter(|(a, _)| **a != ZERO_ADDRESS && **a != BURNING_ADDRESS)
        .filter_map(|(a, stack)| {
            let money = stack_balance(stack);
            if money == BigUint::default() {
                None
            } else {
                Some((*a, turnover(stack, &money, t)))
            }
        })
        .collect()
}

/// Reference balances derived from the same lot stacks, for cross-checking
/// that stack totals and plain inflow/outflow sums agree.
pub fn oracle_stack_balances(
    records: &[TransferRecord],
    t: u64,
) -> BTreeMap<AccountId, BigUint> {
    build_stacks(records, t)
        .iter()
        .map(|(a, s)| (*a, stack_balance(s)))
        .collect()
}
