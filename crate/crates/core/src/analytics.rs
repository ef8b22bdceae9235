//! Holder analytics on top of replayed ledgers: received-amount
//! categories, category decomposition of aggregate turnover, balance time
//! series with day-based smoothing, top-holder extraction and the
//! wrapped-supply fraction.

use std::collections::BTreeMap;

use crate::account::AccountId;
use crate::amount::{ratio_to_f64, TokenAmount};
use crate::error::{AnalyticsError, ConfigError, ReplayError};
use crate::ledger::{BlockHeight, TransferRecord};
use crate::replay::Replay;

/// Received-amount bands, each `[lower, next band's lower)` in whole
/// tokens, the last one unbounded. Stored ascending; the conventional
/// report order (largest first) is a presentation choice.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CategoryTable {
    bands: Vec<Band>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct Band {
    name: String,
    /// Inclusive lower bound, whole tokens. Converted once to base units.
    lower_tokens: u64,
    lower_base: TokenAmount,
}

impl CategoryTable {
    /// `bands` as (name, inclusive lower bound in whole tokens). Must be
    /// a partition of [0, ∞): nonempty, first bound 0, strictly
    /// ascending, distinct names.
    pub fn new(bands: Vec<(String, u64)>) -> Result<Self, ConfigError> {
        if bands.is_empty() {
            return Err(ConfigError::new("categories", "at least one band required"));
        }
        if bands[0].1 != 0 {
            return Err(ConfigError::new(
                "categories",
                format!("first band must start at 0, got {}", bands[0].1),
            ));
        }
        for w in bands.windows(2) {
            if w[0].1 >= w[1].1 {
                return Err(ConfigError::new(
                    "categories",
                    format!("bounds must strictly ascend: {} then {}", w[0].1, w[1].1),
                ));
            }
        }
        let mut names: Vec<&str> = bands.iter().map(|(n, _)| n.as_str()).collect();
        names.sort_unstable();
        if names.windows(2).any(|w| w[0] == w[1]) {
            return Err(ConfigError::new("categories", "band names must be distinct"));
        }
        Ok(CategoryTable {
            bands: bands
                .into_iter()
                .map(|(name, lower_tokens)| Band {
                    name,
                    lower_tokens,
                    lower_base: TokenAmount::from_whole_tokens(lower_tokens),
                })
                .collect(),
        })
    }

    /// Band index for a received total (base units): the last band whose
    /// lower bound does not exceed it. Total by the partition invariant.
    pub fn band_index(&self, received: TokenAmount) -> usize {
        self.bands.partition_point(|b| b.lower_base <= received) - 1
    }

    pub fn name(&self, index: usize) -> &str {
        &self.bands[index].name
    }

    pub fn len(&self) -> usize {
        self.bands.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bands.is_empty()
    }

    /// (name, inclusive lower bound in whole tokens), ascending.
    pub fn bands(&self) -> impl Iterator<Item = (&str, u64)> {
        self.bands.iter().map(|b| (b.name.as_str(), b.lower_tokens))
    }

    /// Band indices in report order: largest lower bound first.
    pub fn report_order(&self) -> impl Iterator<Item = usize> {
        (0..self.bands.len()).rev()
    }
}

impl Default for CategoryTable {
    /// The seven marine-size bands: Whale ≥ 10000, Orca ≥ 3000,
    /// Dolphin ≥ 1000, Fish ≥ 100, Shrimp ≥ 10, Krill ≥ 1, Plankton < 1.
    fn default() -> Self {
        CategoryTable::new(vec![
            ("Plankton".to_string(), 0),
            ("Krill".to_string(), 1),
            ("Shrimp".to_string(), 10),
            ("Fish".to_string(), 100),
            ("Dolphin".to_string(), 1000),
            ("Orca".to_string(), 3000),
            ("Whale".to_string(), 10000),
        ])
        .expect("builtin table is valid")
    }
}

/// Category name for a received total.
pub fn categorize<'t>(received: TokenAmount, table: &'t CategoryTable) -> &'t str {
    table.name(table.band_index(received))
}

/// Sum received per account over the whole record window. Self-transfers
/// are no-ops and excluded; mints count.
pub fn received_by_account(records: &[TransferRecord]) -> BTreeMap<AccountId, TokenAmount> {
    let mut sums: BTreeMap<AccountId, TokenAmount> = BTreeMap::new();
    for r in records {
        if r.from == r.to {
            continue;
        }
        let e = sums.entry(r.to).or_insert(TokenAmount::ZERO);
        *e = e.checked_add(r.value).expect("received sums fit 256 bits");
    }
    sums
}

/// Received total for one account (0 when never a recipient).
pub fn total_received(records: &[TransferRecord], a: &AccountId) -> TokenAmount {
    records
        .iter()
        .filter(|r| r.to == *a && r.from != r.to)
        .fold(TokenAmount::ZERO, |acc, r| {
            acc.checked_add(r.value).expect("received sums fit 256 bits")
        })
}

/// Fixed account→band assignment from whole-window received totals.
pub fn assign_categories(
    records: &[TransferRecord],
    table: &CategoryTable,
) -> BTreeMap<AccountId, usize> {
    received_by_account(records)
        .into_iter()
        .map(|(a, sum)| (a, table.band_index(sum)))
        .collect()
}

/// Category shares of aggregate turnover at one sample block.
#[derive(Clone, Debug, PartialEq)]
pub struct CategoryShareSample {
    pub at_block: BlockHeight,
    /// (category name, share of Σ MᵢVᵢ), in report order. Shares sum to 1.
    pub shares: Vec<(String, f64)>,
}

/// Decomposes aggregate velocity into per-category shares at each
/// scheduled block. Assignment is static over the whole window; shares
/// are ratios of per-category sums of each account's contribution to the
/// aggregate, so they sum to one by construction.
pub fn velocity_shares_by_category(
    records: &[TransferRecord],
    schedule: &[BlockHeight],
    table: &CategoryTable,
) -> Result<Vec<CategoryShareSample>, AnalyticsError> {
    let assignment = assign_categories(records, table);
    velocity_shares_with_assignment(records, schedule, table, &assignment)
}

/// Same decomposition with an externally supplied assignment — used when
/// category bounds live in a different denomination than the replayed
/// ledger (e.g. token-denominated receive totals against a share-replayed
/// history).
pub fn velocity_shares_with_assignment(
    records: &[TransferRecord],
    schedule: &[BlockHeight],
    table: &CategoryTable,
    assignment: &BTreeMap<AccountId, usize>,
) -> Result<Vec<CategoryShareSample>, AnalyticsError> {
    let mut rp = Replay::new();
    let mut idx = 0;
    let mut prev: Option<BlockHeight> = None;
    let mut out = Vec::with_capacity(schedule.len());

    for &t in schedule {
        if let Some(p) = prev {
            if t <= p {
                return Err(ReplayError::ScheduleBehindReplay {
                    sample: t.0,
                    applied: p.0,
                }
                .into());
            }
        }
        prev = Some(t);
        while idx < records.len() && records[idx].block <= t {
            rp.apply(&records[idx])?;
            idx += 1;
        }
        out.push(decompose_at(&rp, t, table, assignment)?);
    }
    Ok(out)
}

fn decompose_at(
    state: &Replay,
    t: BlockHeight,
    table: &CategoryTable,
    assignment: &BTreeMap<AccountId, usize>,
) -> Result<CategoryShareSample, AnalyticsError> {
    let mut money = TokenAmount::ZERO;
    for (a, st) in state.accounts() {
        if !(a.is_zero() || a.is_burning()) && !st.balance().is_zero() {
            money = money
                .checked_add(st.balance())
                .expect("bounded by total minted");
        }
    }
    if money.is_zero() {
        return Err(ReplayError::ZeroSupply(t.0).into());
    }

    // Per-account contribution MᵢVᵢ/M to the aggregate, binned by
    // category. Accounts walk in address order so the float sums are
    // reproducible.
    let mut sums = vec![0.0_f64; table.len()];
    for (a, st) in state.accounts() {
        if a.is_zero() || a.is_burning() || st.balance().is_zero() {
            continue;
        }
        // a funded account always received something, so it is in the
        // assignment map; an external assignment may still omit it
        let band = assignment
            .get(a)
            .copied()
            .unwrap_or_else(|| table.band_index(TokenAmount::ZERO));
        sums[band] += weighted_contribution(st, t, money);
    }
    let total: f64 = sums.iter().sum();
    if total <= 0.0 {
        return Err(ReplayError::ZeroSupply(t.0).into());
    }
    let shares = table
        .report_order()
        .map(|i| (table.name(i).to_string(), sums[i] / total))
        .collect();
    Ok(CategoryShareSample {
        at_block: t,
        shares,
    })
}

fn weighted_contribution(
    st: &crate::replay::AccountState,
    t: BlockHeight,
    money: TokenAmount,
) -> f64 {
    crate::velocity::parcel_inverse_age_sum(st.parcels(), t, money)
}

/// Block→timestamp mapping, either an affine approximation or explicit
/// ingested points with step semantics.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BlockTimeIndex {
    Affine {
        genesis_timestamp: u64,
        seconds_per_block: u64,
    },
    Explicit(Vec<(u64, u64)>),
}

/// Seconds per block in the default affine approximation.
pub const DEFAULT_SECONDS_PER_BLOCK: u64 = 12;

impl BlockTimeIndex {
    pub fn affine(genesis_timestamp: u64, seconds_per_block: u64) -> Result<Self, ConfigError> {
        if seconds_per_block == 0 {
            return Err(ConfigError::new("time_index", "seconds per block must be positive"));
        }
        Ok(BlockTimeIndex::Affine {
            genesis_timestamp,
            seconds_per_block,
        })
    }

    /// Explicit (block, unix timestamp) points; both must be sorted
    /// ascending in block with nondecreasing timestamps.
    pub fn from_points(points: Vec<(u64, u64)>) -> Result<Self, ConfigError> {
        if points.is_empty() {
            return Err(ConfigError::new("time_index", "at least one point required"));
        }
        for w in points.windows(2) {
            if w[0].0 >= w[1].0 {
                return Err(ConfigError::new("time_index", "blocks must strictly ascend"));
            }
            if w[0].1 > w[1].1 {
                return Err(ConfigError::new("time_index", "timestamps must not decrease"));
            }
        }
        Ok(BlockTimeIndex::Explicit(points))
    }

    /// Timestamp at a block. Explicit indexes answer with the latest
    /// point at or before the block, clamping below the first point.
    pub fn timestamp(&self, block: BlockHeight) -> u64 {
        match self {
            BlockTimeIndex::Affine {
                genesis_timestamp,
                seconds_per_block,
            } => genesis_timestamp + block.0 * seconds_per_block,
            BlockTimeIndex::Explicit(points) => {
                let idx = points.partition_point(|(b, _)| *b <= block.0);
                match idx.checked_sub(1) {
                    Some(i) => points[i].1,
                    None => points[0].1,
                }
            }
        }
    }
}

/// Exact sampled balances for one account, optionally with a trailing
/// time-window mean.
#[derive(Clone, Debug, PartialEq)]
pub struct BalanceSeries {
    pub account: AccountId,
    pub points: Vec<(BlockHeight, TokenAmount)>,
    /// Mean of raw samples in the trailing window, when smoothing was
    /// requested. Parallel to `points`.
    pub smoothed: Option<Vec<f64>>,
}

/// Seconds in a smoothing day.
const SECONDS_PER_DAY: u64 = 86_400;

/// Samples each account's balance on a stride-spaced block grid spanning
/// the record range, optionally smoothing with a trailing mean over
/// `smoothing_days`. Day-based smoothing needs a time index.
pub fn balance_series(
    records: &[TransferRecord],
    accounts: &[AccountId],
    stride: u64,
    smoothing_days: Option<u32>,
    time_index: Option<&BlockTimeIndex>,
) -> Result<Vec<BalanceSeries>, AnalyticsError> {
    assert!(stride > 0, "stride must be positive");
    if accounts.is_empty() || records.is_empty() {
        return Ok(accounts
            .iter()
            .map(|a| BalanceSeries {
                account: *a,
                points: Vec::new(),
                smoothed: smoothing_days.map(|_| Vec::new()),
            })
            .collect());
    }
    let index = match (smoothing_days, time_index) {
        (Some(_), None) => return Err(AnalyticsError::MissingTimeIndex),
        (Some(_), Some(ix)) => Some(ix),
        (None, _) => None,
    };

    let first = records.first().expect("nonempty").block.0;
    let last = records.last().expect("nonempty").block.0;
    let grid: Vec<BlockHeight> = (first..=last)
        .step_by(stride as usize)
        .map(BlockHeight)
        .collect();

    let mut rp = Replay::new();
    let mut idx = 0;
    let mut per_account: Vec<Vec<(BlockHeight, TokenAmount)>> =
        vec![Vec::with_capacity(grid.len()); accounts.len()];
    for &t in &grid {
        while idx < records.len() && records[idx].block <= t {
            rp.apply(&records[idx])?;
            idx += 1;
        }
        for (slot, a) in per_account.iter_mut().zip(accounts) {
            let bal = rp.account(a).map(|s| s.balance()).unwrap_or(TokenAmount::ZERO);
            slot.push((t, bal));
        }
    }

    Ok(per_account
        .into_iter()
        .zip(accounts)
        .map(|(points, a)| {
            let smoothed = smoothing_days.map(|days| {
                let ix = index.expect("checked above");
                trailing_time_mean(&points, ix, u64::from(days) * SECONDS_PER_DAY)
            });
            BalanceSeries {
                account: *a,
                points,
                smoothed,
            }
        })
        .collect())
}

/// Mean of raw values whose timestamp falls in [ts(t) − window, ts(t)],
/// for each point t. Two-pointer pass over the (time-ordered) grid.
fn trailing_time_mean(
    points: &[(BlockHeight, TokenAmount)],
    index: &BlockTimeIndex,
    window_seconds: u64,
) -> Vec<f64> {
    let times: Vec<u64> = points.iter().map(|(b, _)| index.timestamp(*b)).collect();
    let mut out = Vec::with_capacity(points.len());
    let mut lo = 0usize;
    let mut sum = 0.0_f64;
    let mut count = 0usize;
    for (i, (_, bal)) in points.iter().enumerate() {
        sum += bal.to_f64();
        count += 1;
        let cutoff = times[i].saturating_sub(window_seconds);
        while times[lo] < cutoff {
            sum -= points[lo].1.to_f64();
            count -= 1;
            lo += 1;
        }
        out.push(sum / count as f64);
    }
    out
}

/// Accounts by descending balance at `t` (ties by ascending address),
/// after dropping the zero address, the burn sink and any caller-supplied
/// exclusions.
pub fn top_holders(
    records: &[TransferRecord],
    t: BlockHeight,
    n: usize,
    exclude: &[AccountId],
) -> Result<Vec<(AccountId, TokenAmount)>, ReplayError> {
    let mut rp = Replay::new();
    for r in records {
        if r.block > t {
            break;
        }
        rp.apply(r)?;
    }
    let mut holders: Vec<(AccountId, TokenAmount)> = rp
        .accounts()
        .iter()
        .filter(|(a, st)| {
            !a.is_zero() && !a.is_burning() && !exclude.contains(a) && !st.balance().is_zero()
        })
        .map(|(a, st)| (*a, st.balance()))
        .collect();
    holders.sort_by(|(a1, b1), (a2, b2)| b2.cmp(b1).then(a1.cmp(a2)));
    holders.truncate(n);
    Ok(holders)
}

/// Well-known protocol contracts that hold wrapped-token balances,
/// shipped as the default exclusion/label set for holder reports.
pub fn builtin_labels() -> Vec<(AccountId, &'static str)> {
    let parse = |s: &str| s.parse::<AccountId>().expect("builtin address is valid");
    vec![
        (
            parse("0x0b925ed163218f6662a35e0f0371ac234f9e9371"),
            "Aave Ethereum wstETH",
        ),
        (
            parse("0x12b54025c112aa61face2cdb7118740875a566e9"),
            "Spark: wstETH",
        ),
        (
            parse("0x248ccbf4864221fc0e840f29bb042ad5bfc89b5c"),
            "SkyMoney: MCD Join wstETH 2",
        ),
        (
            parse("0x10cd5fbe1b404b7e19ef964b63939907bdaf42e2"),
            "SkyMoney: MCD Join wstETH",
        ),
        (
            parse("0xba12222222228d8ba445958a75a0704d566bf2c8"),
            "Balancer Vault",
        ),
    ]
}

/// One point of the wrapped-supply fraction series.
#[derive(Clone, Debug, PartialEq)]
pub struct WrappedPoint {
    pub at_block: BlockHeight,
    /// balance(wrapper contract) / (minted − balance(burn sink)), in [0,1].
    pub fraction: f64,
    pub smoothed: Option<f64>,
}

/// Fraction of circulating supply parked in the wrapper contract at each
/// scheduled block, optionally smoothed with a trailing day-window mean.
pub fn wrapped_share_series(
    records: &[TransferRecord],
    wrapper: &AccountId,
    schedule: &[BlockHeight],
    smoothing_days: Option<u32>,
    time_index: Option<&BlockTimeIndex>,
) -> Result<Vec<WrappedPoint>, AnalyticsError> {
    let index = match (smoothing_days, time_index) {
        (Some(_), None) => return Err(AnalyticsError::MissingTimeIndex),
        (Some(_), Some(ix)) => Some(ix),
        (None, _) => None,
    };

    let mut rp = Replay::new();
    let mut idx = 0;
    let mut prev: Option<BlockHeight> = None;
    let mut raw: Vec<(BlockHeight, f64)> = Vec::with_capacity(schedule.len());
    for &t in schedule {
        if let Some(p) = prev {
            if t <= p {
                return Err(ReplayError::ScheduleBehindReplay {
                    sample: t.0,
                    applied: p.0,
                }
                .into());
            }
        }
        prev = Some(t);
        while idx < records.len() && records[idx].block <= t {
            rp.apply(&records[idx])?;
            idx += 1;
        }
        let burned = rp
            .account(&crate::account::BURNING_ADDRESS)
            .map(|s| s.balance())
            .unwrap_or(TokenAmount::ZERO);
        let supply = rp
            .minted()
            .checked_sub(burned)
            .expect("burn sink only receives");
        if supply.is_zero() {
            return Err(ReplayError::ZeroSupply(t.0).into());
        }
        let held = rp
            .account(wrapper)
            .map(|s| s.balance())
            .unwrap_or(TokenAmount::ZERO);
        raw.push((t, ratio_to_f64(held, supply)));
    }

    let smoothed: Option<Vec<f64>> = index.map(|ix| {
        let window = u64::from(smoothing_days.expect("paired with index")) * SECONDS_PER_DAY;
        let times: Vec<u64> = raw.iter().map(|(b, _)| ix.timestamp(*b)).collect();
        let mut out = Vec::with_capacity(raw.len());
        let mut lo = 0usize;
        let mut sum = 0.0;
        let mut count = 0usize;
        for (i, (_, f)) in raw.iter().enumerate() {
            sum += f;
            count += 1;
            let cutoff = times[i].saturating_sub(window);
            while times[lo] < cutoff {
                sum -= raw[lo].1;
                count -= 1;
                lo += 1;
            }
            out.push(sum / count as f64);
        }
        out
    });

    Ok(raw
        .into_iter()
        .enumerate()
        .map(|(i, (b, f))| WrappedPoint {
            at_block: b,
            fraction: f,
            smoothed: smoothed.as_ref().map(|s| s[i]),
        })
        .collect())
}
