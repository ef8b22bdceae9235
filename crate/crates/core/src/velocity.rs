//! Turnover ("velocity") evaluation over replayed parcel stacks.
//!
//! An account's velocity at block t is the expected inverse holding time
//! of its balance: sum over parcel ages τ of (1/τ) · w(τ)/M, where w(τ)
//! is the amount held for exactly τ blocks and M the balance. The
//! aggregate is the money-weighted mean across accounts.
//!
//! Floating point enters only at the last step, and each w/M ratio is
//! first floored to a fixed 96-bit binary fraction — a pure function of
//! the rational w/M — so results are reproducible across machines, across
//! worker-shard counts, and across uniform rescaling of a whole ledger.

use rayon::prelude::*;

use crate::account::AccountId;
use crate::amount::{ratio_to_f64, TokenAmount};
use crate::error::ReplayError;
use crate::ledger::{BlockHeight, TransferRecord};
use crate::replay::{AccountState, Parcel, Replay};

/// Blocks per week at the post-merge 12 s slot time.
pub const DEFAULT_WEEKLY_WINDOW_BLOCKS: u64 = 50_400;

/// What a velocity sample describes: one account, or the supply-weighted
/// aggregate over all (non-excluded) accounts.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub enum Scope {
    Global,
    Account(AccountId),
}

impl Scope {
    pub fn label(&self) -> String {
        match self {
            Scope::Global => "global".to_string(),
            Scope::Account(a) => a.to_string(),
        }
    }
}

/// One velocity evaluation. `velocity` is in inverse blocks; `money` is
/// the balance (or aggregate supply) the distribution was normalized by.
#[derive(Clone, Copy, PartialEq, Debug)]
pub struct VelocitySample {
    pub at_block: BlockHeight,
    pub scope: Scope,
    pub velocity: f64,
    pub money: TokenAmount,
}

/// Amount held per distinct holding time, ascending by age. Ages are in
/// blocks and clamped below at 1: a parcel acquired in the sample block
/// has the smallest resolvable age on a block clock.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HoldingDistribution {
    pub owner: AccountId,
    pub at_block: BlockHeight,
    entries: Vec<(u64, TokenAmount)>,
}

impl HoldingDistribution {
    /// (age τ, amount) pairs, τ strictly ascending.
    pub fn entries(&self) -> &[(u64, TokenAmount)] {
        &self.entries
    }

    pub fn total(&self) -> TokenAmount {
        self.entries
            .iter()
            .fold(TokenAmount::ZERO, |acc, (_, w)| {
                acc.checked_add(*w).expect("bounded by account balance")
            })
    }

    /// Expected inverse age under this distribution.
    pub fn velocity(&self) -> f64 {
        weighted_inverse_age(&self.entries, self.total())
    }
}

fn clamped_age(t: BlockHeight, acquired: BlockHeight) -> u64 {
    t.0.saturating_sub(acquired.0).max(1)
}

/// Walks parcels newest-first, merging runs of equal clamped age, and
/// feeds (τ, w) pairs to `f` in ascending-τ order. Parcel stacks are
/// sorted by acquisition, so newest-first is ascending in age; no
/// allocation needed.
fn for_each_merged_age(parcels: &[Parcel], t: BlockHeight, mut f: impl FnMut(u64, TokenAmount)) {
    let mut iter = parcels.iter().rev();
    let Some(first) = iter.next() else { return };
    let mut age = clamped_age(t, first.acquired);
    let mut amount = first.amount;
    for p in iter {
        let tau = clamped_age(t, p.acquired);
        if tau == age {
            amount = amount.checked_add(p.amount).expect("bounded by balance");
        } else {
            debug_assert!(tau > age, "parcel stack out of acquisition order");
            f(age, amount);
            age = tau;
            amount = p.amount;
        }
    }
    f(age, amount);
}

/// Σ_τ (w(τ)/money)/τ with the ratio floored to 96 fractional bits before
/// the float divide, summed ascending in τ.
fn weighted_inverse_age(entries: &[(u64, TokenAmount)], money: TokenAmount) -> f64 {
    entries
        .iter()
        .map(|&(tau, w)| ratio_to_f64(w, money) / tau as f64)
        .sum()
}

/// Same sum, computed straight off a parcel stack without materializing
/// the distribution. Against the account's own balance this is its
/// velocity; against the aggregate supply it is the account's
/// contribution MᵢVᵢ/M to the aggregate velocity.
pub(crate) fn parcel_inverse_age_sum(parcels: &[Parcel], t: BlockHeight, money: TokenAmount) -> f64 {
    let mut acc = 0.0;
    for_each_merged_age(parcels, t, |tau, w| {
        acc += ratio_to_f64(w, money) / tau as f64;
    });
    acc
}

/// The account's holding-time distribution at block `t`. Requires a
/// nonzero balance; all records up to `t` must already be applied.
pub fn holding_distribution(
    state: &Replay,
    a: &AccountId,
    t: BlockHeight,
) -> Result<HoldingDistribution, ReplayError> {
    let st = state.account(a).filter(|s| !s.balance().is_zero()).ok_or(
        ReplayError::EmptyAccount {
            account: *a,
            block: t.0,
        },
    )?;
    let mut entries = Vec::new();
    for_each_merged_age(st.parcels(), t, |tau, w| entries.push((tau, w)));
    Ok(HoldingDistribution {
        owner: *a,
        at_block: t,
        entries,
    })
}

/// Velocity of one account at block `t`.
pub fn micro_velocity(
    state: &Replay,
    a: &AccountId,
    t: BlockHeight,
) -> Result<VelocitySample, ReplayError> {
    let st = state.account(a).filter(|s| !s.balance().is_zero()).ok_or(
        ReplayError::EmptyAccount {
            account: *a,
            block: t.0,
        },
    )?;
    Ok(VelocitySample {
        at_block: t,
        scope: Scope::Account(*a),
        velocity: parcel_inverse_age_sum(st.parcels(), t, st.balance()),
        money: st.balance(),
    })
}

fn is_excluded(a: &AccountId) -> bool {
    a.is_zero() || a.is_burning()
}

/// Accounts that count toward the aggregate: positive balance, not the
/// zero address, not the burn sink. Address-ordered (BTreeMap order).
fn included_accounts<'a>(state: &'a Replay) -> Vec<(&'a AccountId, &'a AccountState)> {
    state
        .accounts()
        .iter()
        .filter(|(a, st)| !is_excluded(a) && !st.balance().is_zero())
        .collect()
}

/// Supply-weighted aggregate velocity at block `t`.
///
/// Expanding the weighted mean Σ M_i V_i / M term by term turns every
/// contribution into (w/M)/τ against the aggregate M, so each account
/// yields one float independent of every other. Those per-account floats
/// are reduced strictly in address order no matter how the computation
/// is chunked — that is what makes worker-shard count invisible in the
/// output. `shards` is a parallelism hint only.
pub fn global_velocity_sharded(
    state: &Replay,
    t: BlockHeight,
    shards: usize,
) -> Result<VelocitySample, ReplayError> {
    let included = included_accounts(state);
    let mut money = TokenAmount::ZERO;
    for (_, st) in &included {
        money = money
            .checked_add(st.balance())
            .expect("bounded by total minted");
    }
    if money.is_zero() {
        return Err(ReplayError::ZeroSupply(t.0));
    }

    let chunk = included.len().div_ceil(shards.max(1)).max(1);
    let contributions: Vec<Vec<f64>> = included
        .par_chunks(chunk)
        .map(|part| {
            part.iter()
                .map(|(_, st)| parcel_inverse_age_sum(st.parcels(), t, money))
                .collect()
        })
        .collect();

    let velocity = contributions.iter().flatten().sum();
    Ok(VelocitySample {
        at_block: t,
        scope: Scope::Global,
        velocity,
        money,
    })
}

/// `global_velocity_sharded` with default chunking.
pub fn global_velocity(state: &Replay, t: BlockHeight) -> Result<VelocitySample, ReplayError> {
    global_velocity_sharded(state, t, rayon::current_num_threads())
}

/// Which samples a series pass should emit at each scheduled block.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ScopeFilter {
    /// Only the aggregate.
    Global,
    /// Only the listed accounts (empty accounts silently omitted).
    Accounts(Vec<AccountId>),
    /// The aggregate followed by every funded account, address order.
    All,
}

/// Replays `records` once, emitting velocity samples at each block of the
/// strictly ascending `schedule`. Samples observe every record with
/// block ≤ sample block and none beyond. `shards` tunes parallelism and
/// never changes output.
pub fn sample_series(
    records: &[TransferRecord],
    schedule: &[BlockHeight],
    scope: &ScopeFilter,
    shards: usize,
) -> Result<Vec<VelocitySample>, ReplayError> {
    let mut rp = Replay::new();
    let mut idx = 0;
    let mut prev: Option<BlockHeight> = None;
    let mut out = Vec::new();

    for &t in schedule {
        if let Some(p) = prev {
            if t <= p {
                return Err(ReplayError::ScheduleBehindReplay {
                    sample: t.0,
                    applied: p.0,
                });
            }
        }
        prev = Some(t);
        while idx < records.len() && records[idx].block <= t {
            rp.apply(&records[idx])?;
            idx += 1;
        }

        match scope {
            ScopeFilter::Global => out.push(global_velocity_sharded(&rp, t, shards)?),
            ScopeFilter::Accounts(list) => {
                for a in list {
                    match micro_velocity(&rp, a, t) {
                        Ok(s) => out.push(s),
                        Err(ReplayError::EmptyAccount { .. }) => {}
                        Err(e) => return Err(e),
                    }
                }
            }
            ScopeFilter::All => {
                let included = included_accounts(&rp);
                let mut money = TokenAmount::ZERO;
                for (_, st) in &included {
                    money = money
                        .checked_add(st.balance())
                        .expect("bounded by total minted");
                }
                if money.is_zero() {
                    return Err(ReplayError::ZeroSupply(t.0));
                }
                let chunk = included.len().div_ceil(shards.max(1)).max(1);
                // One parallel pass gives each account's share of the
                // aggregate and its own velocity.
                let parts: Vec<Vec<(AccountId, f64, f64, TokenAmount)>> = included
                    .par_chunks(chunk)
                    .map(|part| {
                        part.iter()
                            .map(|(a, st)| {
                                (
                                    **a,
                                    parcel_inverse_age_sum(st.parcels(), t, money),
                                    parcel_inverse_age_sum(st.parcels(), t, st.balance()),
                                    st.balance(),
                                )
                            })
                            .collect()
                    })
                    .collect();
                let velocity = parts
                    .iter()
                    .flatten()
                    .map(|(_, contribution, _, _)| contribution)
                    .sum();
                out.push(VelocitySample {
                    at_block: t,
                    scope: Scope::Global,
                    velocity,
                    money,
                });
                for (a, _, v, m) in parts.into_iter().flatten() {
                    out.push(VelocitySample {
                        at_block: t,
                        scope: Scope::Account(a),
                        velocity: v,
                        money: m,
                    });
                }
            }
        }
    }
    Ok(out)
}

/// Per-window arithmetic mean of sample velocities, grouped by scope.
#[derive(Clone, Debug, PartialEq)]
pub struct WindowedSample {
    /// First block of the window (inclusive).
    pub window_start: BlockHeight,
    /// One past the last block of the window.
    pub window_end: BlockHeight,
    pub scope: Scope,
    pub mean_velocity: f64,
    pub samples: usize,
}

/// Averages raw samples into fixed-width windows anchored at the earliest
/// sample block. `stride` spaces window starts; equal to `width` gives
/// tumbling windows, smaller values overlapping ones. Windows with no
/// samples are omitted.
pub fn window_average(samples: &[VelocitySample], width: u64, stride: u64) -> Vec<WindowedSample> {
    assert!(width > 0 && stride > 0, "window width and stride must be positive");
    let Some(origin) = samples.iter().map(|s| s.at_block.0).min() else {
        return Vec::new();
    };

    use std::collections::BTreeMap;
    let mut acc: BTreeMap<(u64, Scope), (f64, usize)> = BTreeMap::new();
    for s in samples {
        let off = s.at_block.0 - origin;
        // window k covers [origin + k*stride, origin + k*stride + width)
        let k_hi = off / stride;
        let k_lo = (off + stride).saturating_sub(width) / stride;
        for k in k_lo..=k_hi {
            let e = acc.entry((k, s.scope)).or_insert((0.0, 0));
            e.0 += s.velocity;
            e.1 += 1;
        }
    }

    acc.into_iter()
        .map(|((k, scope), (sum, n))| WindowedSample {
            window_start: BlockHeight(origin + k * stride),
            window_end: BlockHeight(origin + k * stride + width),
            scope,
            mean_velocity: sum / n as f64,
            samples: n,
        })
        .collect()
}
