//! Wire types for the analytics service.
//!
//! Everything that can exceed 53 bits — balances, share amounts, wei —
//! travels as a decimal string so no JSON implementation mangles it. Block
//! numbers and counts stay native integers. The same structs serve as
//! request bodies on the client and extractors on the server, so the two
//! cannot drift apart.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HealthDto {
    pub status: String,
    pub version: String,
}

/// One transfer event; `value` is a decimal amount in base units.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransferDto {
    pub block: u64,
    pub log_index: u64,
    pub from: String,
    pub to: String,
    pub value: String,
}

/// Contract state at one block; amounts are decimal wei / base units.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SnapshotDto {
    pub block: u64,
    pub deposited_validators: u64,
    pub beacon_validators: u64,
    pub beacon_balance: String,
    pub buffered_ether: String,
    pub total_shares: String,
}

/// Where a transfer history comes from. Exactly one shape applies:
/// a server-side CSV path, a previously registered dataset id, or records
/// carried inline in the request.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SourceDto {
    Dataset { dataset: String },
    Path { path: String },
    Inline { records: Vec<TransferDto> },
}

/// Snapshot series source: a CSV path or inline snapshots.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum StateSourceDto {
    Path { path: String },
    Inline { snapshots: Vec<SnapshotDto> },
}

/// Sample schedule: an explicit block list, or an inclusive strided range.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ScheduleDto {
    Blocks(Vec<u64>),
    Range { start: u64, end: u64, stride: u64 },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConvertRequest {
    /// "tokens-to-shares" or "shares-to-tokens".
    pub direction: String,
    pub amount: String,
    pub snapshot: SnapshotDto,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConvertResponse {
    pub value: String,
    /// Shares per pooled-ether base unit at the snapshot, as a decimal.
    pub rate: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ReconstructRequest {
    pub tokens: SourceDto,
    pub native: SourceDto,
    pub state: StateSourceDto,
    #[serde(default)]
    pub shards: Option<usize>,
    /// Write the stitched ledger to this server-side CSV path.
    #[serde(default)]
    pub output: Option<String>,
    /// Register the stitched ledger as a dataset and return its id.
    #[serde(default)]
    pub store: bool,
    #[serde(default)]
    pub dataset_name: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ReconstructResponse {
    pub records: usize,
    pub reconstructed: usize,
    pub native: usize,
    pub cutover_block: Option<u64>,
    pub output: Option<String>,
    pub dataset: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WindowDto {
    pub width: u64,
    pub stride: u64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VelocityRequest {
    pub source: SourceDto,
    /// Denomination of path/inline sources: "shares" (default) or "tokens".
    #[serde(default)]
    pub denomination: Option<String>,
    #[serde(default)]
    pub schedule: Option<ScheduleDto>,
    /// "global" (default), "all", or a list of addresses.
    #[serde(default)]
    pub scope: Option<ScopeDto>,
    #[serde(default)]
    pub shards: Option<usize>,
    #[serde(default)]
    pub window: Option<WindowDto>,
    /// Write samples to this server-side CSV path instead of returning them.
    #[serde(default)]
    pub output: Option<String>,
    #[serde(default)]
    pub window_output: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ScopeDto {
    Keyword(String),
    Accounts(Vec<String>),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VelocitySampleDto {
    pub block: u64,
    /// "global" or a 0x address.
    pub scope: String,
    pub velocity: f64,
    pub money: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WindowedSampleDto {
    pub window_start: u64,
    pub window_end: u64,
    pub scope: String,
    pub mean_velocity: f64,
    pub samples: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VelocityResponse {
    pub sample_count: usize,
    /// Present unless the samples were diverted to `output`.
    pub samples: Option<Vec<VelocitySampleDto>>,
    pub windows: Option<Vec<WindowedSampleDto>>,
    pub output: Option<String>,
    pub window_output: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CategoryBandDto {
    pub name: String,
    /// Whole tokens; the first band must start at 0.
    pub lower_bound_tokens: u64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DecomposeRequest {
    pub source: SourceDto,
    #[serde(default)]
    pub denomination: Option<String>,
    #[serde(default)]
    pub schedule: Option<ScheduleDto>,
    /// Override the built-in bands.
    #[serde(default)]
    pub categories: Option<Vec<CategoryBandDto>>,
    /// Optional separate history used only to bin accounts by cumulative
    /// received amount (e.g. token-denominated receipts binned against a
    /// share-denominated replay).
    #[serde(default)]
    pub assignment_source: Option<SourceDto>,
    #[serde(default)]
    pub assignment_denomination: Option<String>,
    #[serde(default)]
    pub output: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CategoryShareSampleDto {
    pub block: u64,
    /// (category, share of aggregate velocity), largest band first.
    pub shares: Vec<(String, f64)>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DecomposeResponse {
    pub sample_count: usize,
    pub samples: Option<Vec<CategoryShareSampleDto>>,
    pub output: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TimeIndexDto {
    #[serde(default)]
    pub genesis_timestamp: Option<u64>,
    #[serde(default)]
    pub seconds_per_block: Option<u64>,
    /// Explicit (block, unix timestamp) calibration points.
    #[serde(default)]
    pub points: Option<Vec<(u64, u64)>>,
    /// Server-side CSV with block_number,timestamp columns.
    #[serde(default)]
    pub points_path: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BalancesRequest {
    pub source: SourceDto,
    #[serde(default)]
    pub denomination: Option<String>,
    /// Explicit accounts to track.
    #[serde(default)]
    pub accounts: Option<Vec<String>>,
    /// Or: track the top-N holders at the end of the history.
    #[serde(default)]
    pub top: Option<usize>,
    #[serde(default)]
    pub stride: Option<u64>,
    #[serde(default)]
    pub smoothing_days: Option<u32>,
    #[serde(default)]
    pub time: Option<TimeIndexDto>,
    #[serde(default)]
    pub output: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BalancePointDto {
    pub block: u64,
    pub balance: String,
    pub smoothed: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BalanceSeriesDto {
    pub address: String,
    pub points: Vec<BalancePointDto>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BalancesResponse {
    pub series: Option<Vec<BalanceSeriesDto>>,
    pub series_count: usize,
    pub output: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HoldersRequest {
    pub source: SourceDto,
    #[serde(default)]
    pub denomination: Option<String>,
    /// Defaults to the last block in the history.
    #[serde(default)]
    pub at_block: Option<u64>,
    pub count: usize,
    #[serde(default)]
    pub exclude: Option<Vec<String>>,
    /// Server-side CSV of address,label rows.
    #[serde(default)]
    pub labels_path: Option<String>,
    /// Merge in the built-in well-known contract labels.
    #[serde(default)]
    pub builtin_labels: bool,
    #[serde(default)]
    pub output: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HolderDto {
    pub rank: usize,
    pub address: String,
    pub balance: String,
    pub label: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HoldersResponse {
    pub holders: Vec<HolderDto>,
    pub at_block: u64,
    pub output: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WrappedShareRequest {
    pub source: SourceDto,
    #[serde(default)]
    pub denomination: Option<String>,
    /// Wrapper contract address holding the wrapped balance.
    pub wrapper: String,
    #[serde(default)]
    pub schedule: Option<ScheduleDto>,
    #[serde(default)]
    pub smoothing_days: Option<u32>,
    #[serde(default)]
    pub time: Option<TimeIndexDto>,
    #[serde(default)]
    pub output: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WrappedPointDto {
    pub block: u64,
    pub fraction: f64,
    pub smoothed: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WrappedShareResponse {
    pub points: Option<Vec<WrappedPointDto>>,
    pub point_count: usize,
    pub output: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SupplyRequest {
    pub state: StateSourceDto,
    /// Reconstructed or native share history bounding the default schedule.
    #[serde(default)]
    pub ledger: Option<SourceDto>,
    #[serde(default)]
    pub denomination: Option<String>,
    #[serde(default)]
    pub schedule: Option<ScheduleDto>,
    #[serde(default)]
    pub output: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SupplyPointDto {
    pub block: u64,
    pub total_shares: String,
    pub total_pooled_ether: String,
    pub conversion_rate: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SupplyResponse {
    pub points: Option<Vec<SupplyPointDto>>,
    pub point_count: usize,
    pub output: Option<String>,
}

/// Mirror of the generator's config; omitted fields take its defaults.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct GeneratorConfigDto {
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub accounts: Option<u32>,
    #[serde(default)]
    pub transfers: Option<u32>,
    #[serde(default)]
    pub start_block: Option<u64>,
    #[serde(default)]
    pub end_block: Option<u64>,
    #[serde(default)]
    pub mint_fraction: Option<f64>,
    #[serde(default)]
    pub min_value_bits: Option<u32>,
    #[serde(default)]
    pub max_value_bits: Option<u32>,
    #[serde(default)]
    pub whale_fraction: Option<f64>,
    #[serde(default)]
    pub reward_rate_ppm: Option<u64>,
    #[serde(default)]
    pub rebase_period_blocks: Option<u64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GenerateRequest {
    #[serde(default)]
    pub config: GeneratorConfigDto,
    /// Server-side CSV paths for the generated artifacts.
    #[serde(default)]
    pub transfers_output: Option<String>,
    #[serde(default)]
    pub state_output: Option<String>,
    /// Register the generated ledger as a dataset.
    #[serde(default)]
    pub store: bool,
    #[serde(default)]
    pub dataset_name: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GenerateResponse {
    pub records: usize,
    pub snapshots: usize,
    /// Random stream algorithm, so external tools can reproduce the ledger.
    pub algorithm: String,
    pub seed: u64,
    pub first_block: Option<u64>,
    pub last_block: Option<u64>,
    pub transfers_output: Option<String>,
    pub state_output: Option<String>,
    pub dataset: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SelfcheckRequest {
    #[serde(default)]
    pub ledgers: Option<u32>,
    #[serde(default)]
    pub accounts: Option<u32>,
    #[serde(default)]
    pub transfers: Option<u32>,
    #[serde(default)]
    pub base_seed: Option<u64>,
    #[serde(default)]
    pub tolerance: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SelfcheckResponse {
    pub ledgers: u32,
    /// Individual velocity values compared against the reference.
    pub comparisons: u64,
    pub max_relative_error: f64,
    pub tolerance: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FetchLogsRequest {
    pub rpc_url: String,
    /// Defaults to the stETH token contract.
    #[serde(default)]
    pub contract: Option<String>,
    /// Registered event name ("transfer", "transfer-shares") or a raw
    /// 0x topic hash. Defaults to "transfer".
    #[serde(default)]
    pub event: Option<String>,
    pub from_block: u64,
    pub to_block: u64,
    #[serde(default)]
    pub page_size: Option<u64>,
    #[serde(default)]
    pub concurrency: Option<usize>,
    #[serde(default)]
    pub max_attempts: Option<u32>,
    #[serde(default)]
    pub backoff_ms: Option<u64>,
    #[serde(default)]
    pub checkpoint: Option<String>,
    pub output: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FetchStateRequest {
    pub rpc_url: String,
    #[serde(default)]
    pub contract: Option<String>,
    pub from_block: u64,
    pub to_block: u64,
    pub stride: u64,
    #[serde(default)]
    pub max_attempts: Option<u32>,
    #[serde(default)]
    pub backoff_ms: Option<u64>,
    #[serde(default)]
    pub checkpoint: Option<String>,
    pub output: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FetchSummaryDto {
    pub rows: u64,
    pub completed_through: Option<u64>,
    pub output: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CreateDatasetRequest {
    pub transfers: SourceDto,
    #[serde(default)]
    pub denomination: Option<String>,
    #[serde(default)]
    pub state: Option<StateSourceDto>,
    #[serde(default)]
    pub name: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DatasetDto {
    pub id: String,
    pub name: Option<String>,
    pub records: usize,
    pub denomination: String,
    pub first_block: Option<u64>,
    pub last_block: Option<u64>,
    pub has_states: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DatasetListResponse {
    pub datasets: Vec<DatasetDto>,
}

/// Error envelope returned with any non-2xx status.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ApiErrorDto {
    pub error: ApiErrorBody,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ApiErrorBody {
    /// "usage", "data", or "internal".
    pub kind: String,
    pub message: String,
}
