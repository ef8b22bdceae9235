//! Reproducible synthetic ledger generation.
//!
//! Ledgers come out sorted, overdraft-free by construction (spends are capped
//! at the sender's running balance), and fully determined by the config. A
//! matching snapshot series is emitted alongside: the pooled balance grows by
//! a fixed reward rate once per rebase period while shares grow only through
//! mints, so the shares-per-token conversion rate declines over the span the
//! way a real rebasing pool's does.

use crate::rng::{OracleRng, ALGORITHM};
use microvel_core::{
    AccountId, BlockHeight, ConfigError, Denomination, LidoStateSnapshot, StateSeries,
    TokenAmount, TransferRecord, BURNING_ADDRESS, ZERO_ADDRESS,
};
use serde::{Deserialize, Serialize};

/// Fraction of spends routed into the burning sink regardless of config, so
/// every generated ledger exercises the burn-exclusion paths downstream.
pub const BURN_ROUTE_CHANCE: f64 = 0.02;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorConfig {
    pub seed: u64,
    pub accounts: u32,
    pub transfers: u32,
    pub start_block: u64,
    pub end_block: u64,
    /// Probability that a record is a mint from the zero address.
    pub mint_fraction: f64,
    /// Transfer values are log-uniform: a bit width is drawn uniformly from
    /// `[min_value_bits, max_value_bits]`, then a value from `[2^w, 2^{w+1})`.
    pub min_value_bits: u32,
    pub max_value_bits: u32,
    /// Probability that a record's recipient is the single designated whale
    /// account, concentrating turnover the way real holder sets do.
    pub whale_fraction: f64,
    /// Pooled-balance growth applied once per rebase period, in parts per
    /// million. Zero keeps the conversion rate flat.
    pub reward_rate_ppm: u64,
    pub rebase_period_blocks: u64,
}

impl Default for GeneratorConfig {
    fn default() -> Self {
        GeneratorConfig {
            seed: 0,
            accounts: 20,
            transfers: 500,
            start_block: 1_000,
            end_block: 6_000,
            mint_fraction: 0.2,
            min_value_bits: 20,
            max_value_bits: 40,
            whale_fraction: 0.25,
            reward_rate_ppm: 500,
            rebase_period_blocks: 1_000,
        }
    }
}

impl GeneratorConfig {
    /// Name of the random stream algorithm; identical config plus this name
    /// pins the output byte-for-byte across implementations.
    pub fn algorithm(&self) -> &'static str {
        ALGORITHM
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let fraction = |field: &'static str, v: f64| {
            if (0.0..=1.0).contains(&v) {
                Ok(())
            } else {
                Err(ConfigError::new(field, format!("{v} is outside [0, 1]")))
            }
        };
        fraction("mint_fraction", self.mint_fraction)?;
        fraction("whale_fraction", self.whale_fraction)?;
        if self.transfers > 0 && self.accounts == 0 {
            return Err(ConfigError::new(
                "accounts",
                "at least one account is required to receive transfers",
            ));
        }
        if self.end_block < self.start_block {
            return Err(ConfigError::new(
                "end_block",
                format!("span [{}, {}] is inverted", self.start_block, self.end_block),
            ));
        }
        if self.min_value_bits > self.max_value_bits {
            return Err(ConfigError::new(
                "min_value_bits",
                format!(
                    "lower bound 2^{} exceeds upper bound 2^{}",
                    self.min_value_bits, self.max_value_bits
                ),
            ));
        }
        if self.max_value_bits > 63 {
            return Err(ConfigError::new(
                "max_value_bits",
                "values are sampled as 64-bit integers; bound the width at 63",
            ));
        }
        if self.rebase_period_blocks == 0 {
            return Err(ConfigError::new(
                "rebase_period_blocks",
                "rebase period must be at least one block",
            ));
        }
        Ok(())
    }
}

/// Running pool state mirrored into emitted snapshots. All of the pooled
/// balance is reported as buffered ether with the validator counters zeroed,
/// which keeps `total_pooled_ether` equal to `pooled` without modelling a
/// beacon chain.
struct Pool {
    shares: TokenAmount,
    pooled: TokenAmount,
    reward_rate_ppm: u64,
}

impl Pool {
    fn grow(&mut self) {
        let delta = self
            .pooled
            .mul_div_floor(
                TokenAmount::from_u64(self.reward_rate_ppm),
                TokenAmount::from_u64(1_000_000),
            )
            .expect("reward growth cannot overflow 256 bits");
        self.pooled = self.pooled.checked_add(delta).expect("pool overflow");
    }

    fn mint(&mut self, shares: TokenAmount) {
        // New stake enters at the current share price (price 1 for the very
        // first mint), so rewards — not mints — drive the price.
        let added_ether = if self.shares.is_zero() {
            shares
        } else {
            shares
                .mul_div_floor(self.pooled, self.shares)
                .expect("mint value overflow")
        };
        self.shares = self.shares.checked_add(shares).expect("share overflow");
        self.pooled = self.pooled.checked_add(added_ether).expect("pool overflow");
    }

    fn snapshot(&self, block: u64) -> LidoStateSnapshot {
        LidoStateSnapshot {
            block: BlockHeight(block),
            deposited_validators: 0,
            beacon_validators: 0,
            beacon_balance: TokenAmount::ZERO,
            buffered_ether: self.pooled,
            total_shares: self.shares,
        }
    }
}

/// Generate a sorted share-denominated ledger and its snapshot series.
pub fn generate(
    config: &GeneratorConfig,
) -> Result<(Vec<TransferRecord>, StateSeries), ConfigError> {
    config.validate()?;
    let mut rng = OracleRng::new(config.seed);
    let accounts: Vec<AccountId> = (0..config.accounts as u64)
        .map(AccountId::synthetic)
        .collect();
    let whale_index = 0usize;

    let mut balances: Vec<u128> = vec![0; accounts.len()];
    // Indices of accounts with spendable balance; order is irrelevant for
    // correctness but fully deterministic.
    let mut funded: Vec<usize> = Vec::new();
    let mut position: Vec<Option<usize>> = vec![None; accounts.len()];

    let span = config.end_block - config.start_block;
    let max_step = if config.transfers == 0 {
        0
    } else {
        2 * span / u64::from(config.transfers) + 2
    };

    let mut pool = Pool {
        shares: TokenAmount::ZERO,
        pooled: TokenAmount::ZERO,
        reward_rate_ppm: config.reward_rate_ppm,
    };
    let mut snapshots = Vec::new();
    let mut next_boundary = config.start_block;

    let mut records = Vec::with_capacity(config.transfers as usize);
    let mut block = config.start_block;
    let mut log_index = 0u64;

    let sample_value = |rng: &mut OracleRng| -> u64 {
        let width =
            config.min_value_bits + rng.next_below(u64::from(config.max_value_bits - config.min_value_bits + 1)) as u32;
        let base = 1u64 << width;
        base + rng.next_below(base)
    };

    for _ in 0..config.transfers {
        // Snapshot every rebase boundary the block cursor has passed; a
        // boundary sharing a block with records reflects them (end of block).
        while next_boundary < block {
            pool.grow();
            snapshots.push(pool.snapshot(next_boundary));
            next_boundary += config.rebase_period_blocks;
        }

        let minting = funded.is_empty() || rng.chance(config.mint_fraction);
        let (from_index, to, value) = if minting {
            let to_index = if rng.chance(config.whale_fraction) {
                whale_index
            } else {
                rng.next_below(accounts.len() as u64) as usize
            };
            (None, to_index, sample_value(&mut rng))
        } else {
            let from_index = funded[rng.next_below(funded.len() as u64) as usize];
            let to_index = if rng.chance(BURN_ROUTE_CHANCE) {
                usize::MAX // burning sink sentinel
            } else if rng.chance(config.whale_fraction) {
                whale_index
            } else {
                rng.next_below(accounts.len() as u64) as usize
            };
            let to_index = if to_index == from_index {
                if accounts.len() == 1 {
                    usize::MAX
                } else {
                    (from_index + 1) % accounts.len()
                }
            } else {
                to_index
            };
            let desired = u128::from(sample_value(&mut rng));
            let available = balances[from_index];
            let value = if desired <= available {
                desired as u64
            } else {
                // Balance fits in u64 whenever it can't cover a u64 draw.
                rng.next_below(available as u64) + 1
            };
            (Some(from_index), to_index, value)
        };

        let amount = TokenAmount::from_u64(value);
        let from = match from_index {
            None => {
                pool.mint(amount);
                ZERO_ADDRESS
            }
            Some(from_index) => {
                balances[from_index] -= u128::from(value);
                if balances[from_index] == 0 {
                    let slot = position[from_index].take().unwrap();
                    funded.swap_remove(slot);
                    if let Some(&moved) = funded.get(slot) {
                        position[moved] = Some(slot);
                    }
                }
                accounts[from_index]
            }
        };
        let to_account = if to == usize::MAX {
            BURNING_ADDRESS
        } else {
            let was_empty = balances[to] == 0;
            balances[to] += u128::from(value);
            if was_empty {
                position[to] = Some(funded.len());
                funded.push(to);
            }
            accounts[to]
        };

        records.push(TransferRecord {
            block: BlockHeight(block),
            log_index,
            from,
            to: to_account,
            value: amount,
            denomination: Denomination::Shares,
        });

        let step = rng.next_below(max_step);
        let next = (block + step).min(config.end_block);
        if next == block {
            log_index += 1;
        } else {
            block = next;
            log_index = 0;
        }
    }

    while next_boundary <= config.end_block {
        pool.grow();
        snapshots.push(pool.snapshot(next_boundary));
        next_boundary += config.rebase_period_blocks;
    }

    Ok((records, StateSeries::new(snapshots)))
}

/// A ledger split at a simulated switch from token-denominated logging to
/// native share logging, for exercising history reconstruction end to end.
#[derive(Debug, Clone)]
pub struct CutoverFixture {
    /// Token-denominated records covering the whole span, as a chain that
    /// only ever emitted token events would have logged them.
    pub token_records: Vec<TransferRecord>,
    /// Share-denominated records from the cutover block onward.
    pub native_records: Vec<TransferRecord>,
    pub states: StateSeries,
    pub cutover_block: u64,
}

impl CutoverFixture {
    /// Token records strictly before the cutover — the portion a
    /// reconstruction is expected to convert rather than drop.
    pub fn pre_cutover_token_count(&self) -> usize {
        self.token_records
            .partition_point(|r| r.block.0 < self.cutover_block)
    }
}

/// Generate a share ledger, then re-render it the way the chain would have:
/// token values (shares at the snapshot conversion rate) over the full span,
/// plus native share records from a cutover placed ~60% into the record list.
pub fn generate_cutover_fixture(config: &GeneratorConfig) -> Result<CutoverFixture, ConfigError> {
    let (records, states) = generate(config)?;
    let cutover_block = match records.get(records.len() * 6 / 10) {
        Some(r) => r.block.0,
        None => config.start_block,
    };

    let mut token_records = Vec::with_capacity(records.len());
    for r in &records {
        let snap = states
            .at(r.block)
            .expect("generated snapshots cover the record span");
        let token_value = microvel_core::shares_to_tokens(r.value, snap)
            .expect("generated snapshots have nonzero shares from first mint");
        token_records.push(TransferRecord {
            value: token_value,
            denomination: Denomination::Tokens,
            ..*r
        });
    }
    let native_records: Vec<TransferRecord> = records
        .iter()
        .filter(|r| r.block.0 >= cutover_block)
        .cloned()
        .collect();

    Ok(CutoverFixture {
        token_records,
        native_records,
        states,
        cutover_block,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use microvel_core::{first_order_violation, Replay};

    #[test]
    fn zero_transfers_yield_snapshots_only() {
        let config = GeneratorConfig {
            transfers: 0,
            ..GeneratorConfig::default()
        };
        let (records, states) = generate(&config).unwrap();
        assert!(records.is_empty());
        assert_eq!(states.len(), 6); // boundaries 1000..=6000 step 1000
    }

    #[test]
    fn identical_configs_reproduce_identical_ledgers() {
        let config = GeneratorConfig::default();
        let (a, sa) = generate(&config).unwrap();
        let (b, sb) = generate(&config).unwrap();
        assert_eq!(a, b);
        assert_eq!(sa.snapshots(), sb.snapshots());
        let (c, _) = generate(&GeneratorConfig {
            seed: 1,
            ..config
        })
        .unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn mint_fraction_one_mints_everything() {
        let config = GeneratorConfig {
            mint_fraction: 1.0,
            transfers: 200,
            ..GeneratorConfig::default()
        };
        let (records, _) = generate(&config).unwrap();
        assert_eq!(records.len(), 200);
        assert!(records.iter().all(|r| r.from == ZERO_ADDRESS));
    }

    #[test]
    fn ledgers_are_sorted_with_unique_keys() {
        let (records, _) = generate(&GeneratorConfig::default()).unwrap();
        assert_eq!(first_order_violation(&records), None);
        for pair in records.windows(2) {
            assert!(pair[0].key() < pair[1].key());
        }
        assert!(records.first().unwrap().block.0 >= 1_000);
        assert!(records.last().unwrap().block.0 <= 6_000);
    }

    #[test]
    fn generated_ledgers_never_overdraft() {
        for seed in 0..20 {
            let config = GeneratorConfig {
                seed,
                mint_fraction: 0.05,
                ..GeneratorConfig::default()
            };
            let (records, _) = generate(&config).unwrap();
            let mut replay = Replay::new();
            replay.apply_all(&records).expect("no overdrafts by construction");
        }
    }

    #[test]
    fn whale_knob_concentrates_inflow() {
        let base = GeneratorConfig {
            transfers: 2_000,
            ..GeneratorConfig::default()
        };
        let whale = AccountId::synthetic(0);
        let inflows = |records: &[TransferRecord]| {
            records.iter().filter(|r| r.to == whale).count()
        };
        let (concentrated, _) = generate(&GeneratorConfig {
            whale_fraction: 0.9,
            ..base.clone()
        })
        .unwrap();
        let (diffuse, _) = generate(&GeneratorConfig {
            whale_fraction: 0.0,
            ..base
        })
        .unwrap();
        assert!(inflows(&concentrated) > 10 * inflows(&diffuse).max(1));
    }

    #[test]
    fn share_price_rises_between_mint_free_rebases() {
        // With mint_fraction 0 only the bootstrap mint occurs, so every later
        // period is reward-only growth: price must be strictly nondecreasing.
        let config = GeneratorConfig {
            mint_fraction: 0.0,
            transfers: 50,
            reward_rate_ppm: 1_000,
            ..GeneratorConfig::default()
        };
        let (records, states) = generate(&config).unwrap();
        assert_eq!(
            records.iter().filter(|r| r.from == ZERO_ADDRESS).count(),
            1
        );
        let snaps: Vec<_> = states
            .snapshots()
            .iter()
            .filter(|s| !s.total_shares.is_zero())
            .collect();
        assert!(snaps.len() >= 2);
        for pair in snaps.windows(2) {
            let (a, b) = (pair[0], pair[1]);
            // price_b >= price_a  <=>  pooled_b * shares_a >= pooled_a * shares_b
            let lhs = b
                .total_pooled_ether()
                .unwrap()
                .mul_div_floor(a.total_shares, TokenAmount::from_u64(1))
                .unwrap();
            let rhs = a
                .total_pooled_ether()
                .unwrap()
                .mul_div_floor(b.total_shares, TokenAmount::from_u64(1))
                .unwrap();
            assert!(lhs >= rhs, "share price regressed between snapshots");
        }
    }

    #[test]
    fn value_widths_respect_configured_bounds() {
        let config = GeneratorConfig {
            min_value_bits: 10,
            max_value_bits: 12,
            mint_fraction: 1.0,
            transfers: 300,
            ..GeneratorConfig::default()
        };
        let (records, _) = generate(&config).unwrap();
        for r in records {
            let v = u128::from_be_bytes(r.value.to_be_bytes()[16..].try_into().unwrap());
            assert!((1 << 10..1 << 13).contains(&v), "{v} outside sampled range");
        }
    }

    #[test]
    fn invalid_configs_are_rejected_by_field() {
        let bad = [
            GeneratorConfig {
                mint_fraction: 1.5,
                ..GeneratorConfig::default()
            },
            GeneratorConfig {
                whale_fraction: -0.1,
                ..GeneratorConfig::default()
            },
            GeneratorConfig {
                accounts: 0,
                transfers: 1,
                ..GeneratorConfig::default()
            },
            GeneratorConfig {
                end_block: 10,
                start_block: 20,
                ..GeneratorConfig::default()
            },
            GeneratorConfig {
                min_value_bits: 40,
                max_value_bits: 20,
                ..GeneratorConfig::default()
            },
            GeneratorConfig {
                max_value_bits: 64,
                ..GeneratorConfig::default()
            },
            GeneratorConfig {
                rebase_period_blocks: 0,
                ..GeneratorConfig::default()
            },
        ];
        let fields: Vec<&str> = bad.iter().map(|c| c.validate().unwrap_err().field).collect();
        assert_eq!(
            fields,
            vec![
                "mint_fraction",
                "whale_fraction",
                "accounts",
                "end_block",
                "min_value_bits",
                "max_value_bits",
                "rebase_period_blocks",
            ]
        );
    }

    #[test]
    fn cutover_fixture_partitions_cleanly() {
        let fixture = generate_cutover_fixture(&GeneratorConfig::default()).unwrap();
        let (full, _) = generate(&GeneratorConfig::default()).unwrap();
        assert_eq!(fixture.token_records.len(), full.len());
        assert!(fixture
            .token_records
            .iter()
            .all(|r| r.denomination == Denomination::Tokens));
        assert!(fixture
            .native_records
            .iter()
            .all(|r| r.denomination == Denomination::Shares));
        assert!(fixture
            .native_records
            .iter()
            .all(|r| r.block.0 >= fixture.cutover_block));
        assert_eq!(
            fixture.pre_cutover_token_count() + fixture.native_records.len(),
            full.len()
        );
        assert!(!fixture.native_records.is_empty());
        assert!(fixture.pre_cutover_token_count() > 0);
    }

    #[test]
    fn config_round_trips_through_json() {
        let config = GeneratorConfig::default();
        let text = serde_json::to_string(&config).unwrap();
        let back: GeneratorConfig = serde_json::from_str(&text).unwrap();
        assert_eq!(config, back);
        assert_eq!(config.algorithm(), "splitmix64-counter-v1");
    }
}
