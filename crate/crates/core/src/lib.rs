//! Ledger-replay engine for rebasing staked-ether tokens.
//!
//! Reconstructs share-denominated transfer histories from raw event
//! records, replays them into per-account holdings with parcel-level
//! acquisition times, and derives turnover and holder analytics on top.

pub mod account;
pub mod amount;
pub mod analytics;
pub mod error;
pub mod io;
pub mod ledger;
pub mod reconstruct;
pub mod replay;
pub mod state;
pub mod velocity;

pub use account::{AccountId, BURNING_ADDRESS, ZERO_ADDRESS};
pub use analytics::{
    assign_categories, balance_series, builtin_labels, categorize, top_holders, total_received,
    velocity_shares_by_category, wrapped_share_series, BalanceSeries, BlockTimeIndex,
    CategoryShareSample, CategoryTable, WrappedPoint,
};
pub use amount::{parse_token_decimal, ratio_to_f64, TokenAmount, BASE_UNITS_PER_TOKEN};
pub use error::{
    AnalyticsError, ConfigError, CsvError, FetchError, LedgerError, ReconstructError, ReplayError,
};
pub use ledger::{
    first_order_violation, BlockHeight, Denomination, LidoStateSnapshot, Rational, TransferRecord,
};
pub use reconstruct::{
    reconstruct, shares_to_tokens, supply_series, tokens_to_shares, Provenance, ShareLedger,
    SupplyPoint,
};
pub use replay::{AccountState, Parcel, Replay};
pub use state::StateSeries;
pub use velocity::{
    global_velocity, global_velocity_sharded, holding_distribution, micro_velocity,
    sample_series, window_average, HoldingDistribution, Scope, ScopeFilter, VelocitySample,
    WindowedSample, DEFAULT_WEEKLY_WINDOW_BLOCKS,
};
