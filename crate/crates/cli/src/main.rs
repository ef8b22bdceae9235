//! `microvel` — command-line front end for the ledger analytics service.
//!
//! Every subcommand is a thin client call. With `--server` (or the
//! `MICROVEL_SERVER` environment variable) requests go to a standing
//! deployment; otherwise an in-process server is started on an ephemeral
//! localhost port, so the CLI works standalone with nothing to manage.
//!
//! Exit codes: 0 success, 1 bad invocation, 2 the request could not be
//! satisfied (unreadable data, server fault, transport failure).

use clap::{Args, Parser, Subcommand, ValueEnum};
use microvel_client::wire::*;
use microvel_client::{ApiClient, ClientError, ErrorKind};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

const USAGE_EXIT: u8 = 1;
const FAILURE_EXIT: u8 = 2;

#[derive(Parser)]
#[command(
    name = "microvel",
    version,
    about = "Share-ledger reconstruction and turnover analytics for rebasing tokens"
)]
struct Cli {
    /// Analytics service URL (falls back to MICROVEL_SERVER, then to an
    /// embedded in-process server)
    #[arg(long, global = true, value_name = "URL")]
    server: Option<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the analytics service on a fixed address
    Serve {
        #[arg(long, default_value = "127.0.0.1:8645")]
        bind: String,
    },
    /// Service liveness and version
    Health,
    /// Convert an amount between denominations at a pinned pool state
    Convert(ConvertArgs),
    /// Produce a seeded synthetic ledger and its snapshot series
    Generate(GenerateArgs),
    /// Stitch a token-era history and native share events into one ledger
    Reconstruct(ReconstructArgs),
    /// Turnover velocity over a block schedule
    Velocity(VelocityArgs),
    /// Velocity share per holder-size category
    Decompose(DecomposeArgs),
    /// Balance trajectories for chosen accounts
    Balances(BalancesArgs),
    /// Top holders by balance at a block
    Holders(HoldersArgs),
    /// Fraction of supply sitting inside a wrapper contract
    WrappedShare(WrappedShareArgs),
    /// Total shares, pooled ether and conversion rate over time
    Supply(SupplyArgs),
    /// Sweep seeded ledgers and compare the engine against the
    /// independent reference implementation
    Selfcheck(SelfcheckArgs),
    /// Download transfer-style event logs into a CSV
    FetchLogs(FetchLogsArgs),
    /// Sample contract state variables into a CSV
    FetchState(FetchStateArgs),
    /// Inspect or drop datasets registered on the server
    #[command(subcommand)]
    Datasets(DatasetsCommand),
}

/// Which ledger flavor a CSV holds; sets the denomination of its amounts.
#[derive(Clone, Copy, Debug, ValueEnum)]
enum Kind {
    /// stETH Transfer events, token-denominated
    StethTokens,
    /// stETH TransferShares events, share-denominated
    StethShares,
    /// wstETH transfers — wrapped balances are share-denominated
    Wsteth,
}

impl Kind {
    fn denomination(self) -> &'static str {
        match self {
            Kind::StethTokens => "tokens",
            Kind::StethShares | Kind::Wsteth => "shares",
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Direction {
    TokensToShares,
    SharesToTokens,
}

#[derive(Args)]
struct SourceArgs {
    /// Transfer-history CSV (.csv or .csv.gz)
    #[arg(long, value_name = "PATH", required_unless_present = "dataset", conflicts_with = "dataset")]
    input: Option<PathBuf>,
    /// Server-side dataset id instead of a file
    #[arg(long, value_name = "ID")]
    dataset: Option<String>,
    /// How to read --input amounts
    #[arg(long, value_enum)]
    kind: Option<Kind>,
}

impl SourceArgs {
    fn source(&self) -> SourceDto {
        match (&self.dataset, &self.input) {
            (Some(id), _) => SourceDto::Dataset {
                dataset: id.clone(),
            },
            (None, Some(path)) => SourceDto::Path {
                path: path_str(path),
            },
            (None, None) => unreachable!("clap enforces one source"),
        }
    }

    fn denomination(&self) -> Option<String> {
        self.kind.map(|k| k.denomination().to_string())
    }
}

#[derive(Args)]
struct ScheduleArgs {
    /// Explicit sample blocks, comma-separated
    #[arg(long, value_delimiter = ',', conflicts_with_all = ["from", "to", "every"])]
    blocks: Vec<u64>,
    /// Range start (goes with --to and --every)
    #[arg(long)]
    from: Option<u64>,
    /// Inclusive range end
    #[arg(long)]
    to: Option<u64>,
    /// Block stride within the range
    #[arg(long)]
    every: Option<u64>,
}

impl ScheduleArgs {
    fn schedule(&self) -> Result<Option<ScheduleDto>, Failure> {
        if !self.blocks.is_empty() {
            return Ok(Some(ScheduleDto::Blocks(self.blocks.clone())));
        }
        match (self.from, self.to, self.every) {
            (None, None, None) => Ok(None),
            (Some(start), Some(end), Some(stride)) => {
                Ok(Some(ScheduleDto::Range { start, end, stride }))
            }
            _ => Err(Failure::usage("--from, --to and --every go together")),
        }
    }
}

#[derive(Args)]
struct TimeArgs {
    /// Smoothing window in days (needs a block-time mapping)
    #[arg(long)]
    smooth_days: Option<u32>,
    /// Unix timestamp of block 0, for an affine block-time mapping
    #[arg(long)]
    genesis_timestamp: Option<u64>,
    /// Seconds per block for the affine mapping
    #[arg(long)]
    seconds_per_block: Option<u64>,
    /// CSV of block_number,timestamp calibration points
    #[arg(long, value_name = "PATH")]
    time_points: Option<PathBuf>,
}

impl TimeArgs {
    fn time(&self) -> Option<TimeIndexDto> {
        if self.genesis_timestamp.is_none()
            && self.seconds_per_block.is_none()
            && self.time_points.is_none()
        {
            return None;
        }
        Some(TimeIndexDto {
            genesis_timestamp: self.genesis_timestamp,
            seconds_per_block: self.seconds_per_block,
            points: None,
            points_path: self.time_points.as_deref().map(path_str),
        })
    }
}

#[derive(Args)]
struct ConvertArgs {
    #[arg(long, value_enum)]
    direction: Direction,
    /// Amount in base units
    #[arg(long)]
    amount: String,
    #[arg(long, default_value_t = 0)]
    at_block: u64,
    /// Wei buffered in the pool contract
    #[arg(long)]
    buffered_ether: String,
    #[arg(long)]
    total_shares: String,
    /// Wei reported on the consensus side
    #[arg(long, default_value = "0")]
    beacon_balance: String,
    #[arg(long, default_value_t = 0)]
    deposited_validators: u64,
    #[arg(long, default_value_t = 0)]
    beacon_validators: u64,
}

#[derive(Args)]
struct GenerateArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    accounts: Option<u32>,
    #[arg(long)]
    transfers: Option<u32>,
    #[arg(long)]
    start_block: Option<u64>,
    #[arg(long)]
    end_block: Option<u64>,
    /// Fraction of events that mint fresh supply
    #[arg(long)]
    mint_fraction: Option<f64>,
    #[arg(long)]
    min_value_bits: Option<u32>,
    #[arg(long)]
    max_value_bits: Option<u32>,
    /// Fraction of spends routed to one concentrated holder
    #[arg(long)]
    whale_fraction: Option<f64>,
    /// Pooled-ether growth per rebase period, parts per million
    #[arg(long)]
    reward_rate_ppm: Option<u64>,
    #[arg(long)]
    rebase_period_blocks: Option<u64>,
    /// Write the transfer history here
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Write the snapshot series here
    #[arg(long, value_name = "PATH")]
    state_out: Option<PathBuf>,
    /// Keep the ledger on the server as a dataset
    #[arg(long)]
    store: bool,
    #[arg(long)]
    name: Option<String>,
}

#[derive(Args)]
struct ReconstructArgs {
    /// Token-denominated transfer CSV (pre-cutover era)
    #[arg(long, value_name = "PATH")]
    tokens: PathBuf,
    /// Native share-event CSV
    #[arg(long, value_name = "PATH")]
    native: PathBuf,
    /// Snapshot-series CSV used for conversion
    #[arg(long, value_name = "PATH")]
    state: PathBuf,
    #[arg(long)]
    shards: Option<usize>,
    /// Write the stitched ledger here
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Keep the stitched ledger on the server as a dataset
    #[arg(long)]
    store: bool,
    #[arg(long)]
    name: Option<String>,
}

#[derive(Args)]
struct VelocityArgs {
    #[command(flatten)]
    source: SourceArgs,
    #[command(flatten)]
    schedule: ScheduleArgs,
    /// "global", "all", or a comma-separated address list
    #[arg(long)]
    scope: Option<String>,
    #[arg(long)]
    shards: Option<usize>,
    /// Window width in blocks for averaged output
    #[arg(long)]
    window: Option<u64>,
    #[arg(long, requires = "window")]
    window_stride: Option<u64>,
    /// Write samples to this CSV instead of printing them
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    #[arg(long, value_name = "PATH")]
    window_out: Option<PathBuf>,
}

#[derive(Args)]
struct DecomposeArgs {
    #[command(flatten)]
    source: SourceArgs,
    #[command(flatten)]
    schedule: ScheduleArgs,
    /// Override a category band as NAME=LOWER_TOKENS; repeatable,
    /// lowest band must start at 0
    #[arg(long = "band", value_name = "NAME=LOWER")]
    bands: Vec<String>,
    /// Bin accounts by receipts from this separate history
    #[arg(long, value_name = "PATH")]
    assignment: Option<PathBuf>,
    #[arg(long, value_enum, requires = "assignment")]
    assignment_kind: Option<Kind>,
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BalancesArgs {
    #[command(flatten)]
    source: SourceArgs,
    /// Track these accounts, comma-separated
    #[arg(long, value_delimiter = ',', conflicts_with = "top")]
    accounts: Vec<String>,
    /// Or track the current top-N holders
    #[arg(long)]
    top: Option<usize>,
    /// Sample stride in blocks
    #[arg(long)]
    stride: Option<u64>,
    #[command(flatten)]
    time: TimeArgs,
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct HoldersArgs {
    #[command(flatten)]
    source: SourceArgs,
    #[arg(long, default_value_t = 10)]
    count: usize,
    /// Defaults to the last block of the history
    #[arg(long)]
    at: Option<u64>,
    /// Leave these addresses out, comma-separated
    #[arg(long, value_delimiter = ',')]
    exclude: Vec<String>,
    /// CSV of address,label rows
    #[arg(long, value_name = "PATH")]
    labels: Option<PathBuf>,
    /// Also apply the built-in well-known contract labels
    #[arg(long)]
    builtin_labels: bool,
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct WrappedShareArgs {
    #[command(flatten)]
    source: SourceArgs,
    /// Wrapper contract address holding the wrapped balance
    #[arg(long)]
    wrapper: String,
    #[command(flatten)]
    schedule: ScheduleArgs,
    #[command(flatten)]
    time: TimeArgs,
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SupplyArgs {
    /// Snapshot-series CSV
    #[arg(long, value_name = "PATH")]
    state: PathBuf,
    /// Share history bounding the default schedule
    #[arg(long, value_name = "PATH")]
    ledger: Option<PathBuf>,
    #[arg(long, value_enum)]
    kind: Option<Kind>,
    #[command(flatten)]
    schedule: ScheduleArgs,
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SelfcheckArgs {
    #[arg(long)]
    ledgers: Option<u32>,
    #[arg(long)]
    accounts: Option<u32>,
    #[arg(long)]
    transfers: Option<u32>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    tolerance: Option<f64>,
}

#[derive(Args)]
struct FetchLogsArgs {
    /// JSON-RPC endpoint (falls back to MICROVEL_RPC_URL)
    #[arg(long, value_name = "URL")]
    rpc_url: Option<String>,
    /// Token contract; defaults to the stETH pool
    #[arg(long)]
    contract: Option<String>,
    /// Event name ("transfer", "transfer-shares") or a raw 0x topic
    #[arg(long)]
    event: Option<String>,
    #[arg(long)]
    from: u64,
    #[arg(long)]
    to: u64,
    #[arg(long)]
    page_size: Option<u64>,
    #[arg(long)]
    concurrency: Option<usize>,
    #[arg(long)]
    max_attempts: Option<u32>,
    #[arg(long)]
    backoff_ms: Option<u64>,
    /// Progress file; an existing one makes the run resume after it
    #[arg(long, value_name = "PATH")]
    checkpoint: Option<PathBuf>,
    #[arg(long, value_name = "PATH")]
    out: PathBuf,
}

#[derive(Args)]
struct FetchStateArgs {
    #[arg(long, value_name = "URL")]
    rpc_url: Option<String>,
    #[arg(long)]
    contract: Option<String>,
    #[arg(long)]
    from: u64,
    #[arg(long)]
    to: u64,
    /// Sample stride in blocks
    #[arg(long)]
    every: u64,
    #[arg(long)]
    max_attempts: Option<u32>,
    #[arg(long)]
    backoff_ms: Option<u64>,
    #[arg(long, value_name = "PATH")]
    checkpoint: Option<PathBuf>,
    #[arg(long, value_name = "PATH")]
    out: PathBuf,
}

#[derive(Subcommand)]
enum DatasetsCommand {
    /// List registered datasets
    List,
    /// Describe one dataset
    Show { id: String },
    /// Drop one dataset
    Rm { id: String },
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: USAGE_EXIT,
            message: message.into(),
        }
    }

    fn runtime(message: impl Into<String>) -> Self {
        Failure {
            code: FAILURE_EXIT,
            message: message.into(),
        }
    }
}

impl From<ClientError> for Failure {
    fn from(e: ClientError) -> Self {
        let code = match e.kind() {
            ErrorKind::Usage => USAGE_EXIT,
            ErrorKind::Data | ErrorKind::Internal => FAILURE_EXIT,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn path_str(path: &Path) -> String {
    path.to_string_lossy().into_owned()
}

fn emit<T: serde::Serialize>(value: &T) -> Result<(), Failure> {
    let text = serde_json::to_string_pretty(value)
        .map_err(|e| Failure::runtime(format!("render response: {e}")))?;
    println!("{text}");
    Ok(())
}

fn parse_scope(raw: &str) -> ScopeDto {
    match raw {
        "global" | "all" => ScopeDto::Keyword(raw.to_string()),
        list => ScopeDto::Accounts(list.split(',').map(str::to_string).collect()),
    }
}

fn parse_bands(raw: &[String]) -> Result<Option<Vec<CategoryBandDto>>, Failure> {
    if raw.is_empty() {
        return Ok(None);
    }
    let mut bands = Vec::with_capacity(raw.len());
    for item in raw {
        let (name, lower) = item
            .split_once('=')
            .ok_or_else(|| Failure::usage(format!("band {item:?} is not NAME=LOWER")))?;
        let lower_bound_tokens: u64 = lower
            .parse()
            .map_err(|e| Failure::usage(format!("band {item:?}: {e}")))?;
        bands.push(CategoryBandDto {
            name: name.to_string(),
            lower_bound_tokens,
        });
    }
    Ok(Some(bands))
}

fn rpc_url(flag: Option<String>) -> Result<String, Failure> {
    flag.or_else(|| std::env::var("MICROVEL_RPC_URL").ok().filter(|s| !s.is_empty()))
        .ok_or_else(|| Failure::usage("no RPC endpoint: pass --rpc-url or set MICROVEL_RPC_URL"))
}

async fn connect(server: Option<String>) -> Result<ApiClient, Failure> {
    let explicit = server.or_else(|| {
        std::env::var("MICROVEL_SERVER")
            .ok()
            .filter(|s| !s.is_empty())
    });
    match explicit {
        Some(url) => Ok(ApiClient::new(url)),
        None => {
            let (addr, _server_task) = microvel_service::spawn_ephemeral()
                .await
                .map_err(|e| Failure::runtime(format!("embedded server: {e}")))?;
            Ok(ApiClient::new(format!("http://{addr}")))
        }
    }
}

async fn run(cli: Cli) -> Result<(), Failure> {
    if let Command::Serve { bind } = &cli.command {
        let listener = tokio::net::TcpListener::bind(bind.as_str())
            .await
            .map_err(|e| Failure::runtime(format!("bind {bind}: {e}")))?;
        return microvel_service::serve(listener)
            .await
            .map_err(|e| Failure::runtime(format!("serve: {e}")));
    }

    let api = connect(cli.server).await?;
    match cli.command {
        Command::Serve { .. } => unreachable!("handled above"),
        Command::Health => emit(&api.health().await?),
        Command::Convert(args) => {
            let direction = match args.direction {
                Direction::TokensToShares => "tokens-to-shares",
                Direction::SharesToTokens => "shares-to-tokens",
            };
            let request = ConvertRequest {
                direction: direction.to_string(),
                amount: args.amount,
                snapshot: SnapshotDto {
                    block: args.at_block,
                    deposited_validators: args.deposited_validators,
                    beacon_validators: args.beacon_validators,
                    beacon_balance: args.beacon_balance,
                    buffered_ether: args.buffered_ether,
                    total_shares: args.total_shares,
                },
            };
            emit(&api.convert(&request).await?)
        }
        Command::Generate(args) => {
            let request = GenerateRequest {
                config: GeneratorConfigDto {
                    seed: Some(args.seed),
                    accounts: args.accounts,
                    transfers: args.transfers,
                    start_block: args.start_block,
                    end_block: args.end_block,
                    mint_fraction: args.mint_fraction,
                    min_value_bits: args.min_value_bits,
                    max_value_bits: args.max_value_bits,
                    whale_fraction: args.whale_fraction,
                    reward_rate_ppm: args.reward_rate_ppm,
                    rebase_period_blocks: args.rebase_period_blocks,
                },
                transfers_output: args.out.as_deref().map(path_str),
                state_output: args.state_out.as_deref().map(path_str),
                store: args.store,
                dataset_name: args.name,
            };
            emit(&api.generate(&request).await?)
        }
        Command::Reconstruct(args) => {
            let request = ReconstructRequest {
                tokens: SourceDto::Path {
                    path: path_str(&args.tokens),
                },
                native: SourceDto::Path {
                    path: path_str(&args.native),
                },
                state: StateSourceDto::Path {
                    path: path_str(&args.state),
                },
                shards: args.shards,
                output: args.out.as_deref().map(path_str),
                store: args.store,
                dataset_name: args.name,
            };
            emit(&api.reconstruct(&request).await?)
        }
        Command::Velocity(args) => {
            let request = VelocityRequest {
                source: args.source.source(),
                denomination: args.source.denomination(),
                schedule: args.schedule.schedule()?,
                scope: args.scope.as_deref().map(parse_scope),
                shards: args.shards,
                window: match (args.window, args.window_stride) {
                    (Some(width), stride) => Some(WindowDto {
                        width,
                        stride: stride.unwrap_or(width),
                    }),
                    (None, _) => None,
                },
                output: args.out.as_deref().map(path_str),
                window_output: args.window_out.as_deref().map(path_str),
            };
            emit(&api.velocity(&request).await?)
        }
        Command::Decompose(args) => {
            let request = DecomposeRequest {
                source: args.source.source(),
                denomination: args.source.denomination(),
                schedule: args.schedule.schedule()?,
                categories: parse_bands(&args.bands)?,
                assignment_source: args.assignment.as_deref().map(|p| SourceDto::Path {
                    path: path_str(p),
                }),
                assignment_denomination: args
                    .assignment_kind
                    .map(|k| k.denomination().to_string()),
                output: args.out.as_deref().map(path_str),
            };
            emit(&api.decompose(&request).await?)
        }
        Command::Balances(args) => {
            let request = BalancesRequest {
                source: args.source.source(),
                denomination: args.source.denomination(),
                accounts: if args.accounts.is_empty() {
                    None
                } else {
                    Some(args.accounts)
                },
                top: args.top,
                stride: args.stride,
                smoothing_days: args.time.smooth_days,
                time: args.time.time(),
                output: args.out.as_deref().map(path_str),
            };
            emit(&api.balances(&request).await?)
        }
        Command::Holders(args) => {
            let request = HoldersRequest {
                source: args.source.source(),
                denomination: args.source.denomination(),
                at_block: args.at,
                count: args.count,
                exclude: if args.exclude.is_empty() {
                    None
                } else {
                    Some(args.exclude)
                },
                labels_path: args.labels.as_deref().map(path_str),
                builtin_labels: args.builtin_labels,
                output: args.out.as_deref().map(path_str),
            };
            emit(&api.holders(&request).await?)
        }
        Command::WrappedShare(args) => {
            let request = WrappedShareRequest {
                source: args.source.source(),
                denomination: args.source.denomination(),
                wrapper: args.wrapper,
                schedule: args.schedule.schedule()?,
                smoothing_days: args.time.smooth_days,
                time: args.time.time(),
                output: args.out.as_deref().map(path_str),
            };
            emit(&api.wrapped_share(&request).await?)
        }
        Command::Supply(args) => {
            let request = SupplyRequest {
                state: StateSourceDto::Path {
                    path: path_str(&args.state),
                },
                ledger: args.ledger.as_deref().map(|p| SourceDto::Path {
                    path: path_str(p),
                }),
                denomination: args.kind.map(|k| k.denomination().to_string()),
                schedule: args.schedule.schedule()?,
                output: args.out.as_deref().map(path_str),
            };
            emit(&api.supply(&request).await?)
        }
        Command::Selfcheck(args) => {
            let request = SelfcheckRequest {
                ledgers: args.ledgers,
                accounts: args.accounts,
                transfers: args.transfers,
                base_seed: args.seed,
                tolerance: args.tolerance,
            };
            emit(&api.selfcheck(&request).await?)
        }
        Command::FetchLogs(args) => {
            let request = FetchLogsRequest {
                rpc_url: rpc_url(args.rpc_url)?,
                contract: args.contract,
                event: args.event,
                from_block: args.from,
                to_block: args.to,
                page_size: args.page_size,
                concurrency: args.concurrency,
                max_attempts: args.max_attempts,
                backoff_ms: args.backoff_ms,
                checkpoint: args.checkpoint.as_deref().map(path_str),
                output: path_str(&args.out),
            };
            emit(&api.fetch_logs(&request).await?)
        }
        Command::FetchState(args) => {
            let request = FetchStateRequest {
                rpc_url: rpc_url(args.rpc_url)?,
                contract: args.contract,
                from_block: args.from,
                to_block: args.to,
                stride: args.every,
                max_attempts: args.max_attempts,
                backoff_ms: args.backoff_ms,
                checkpoint: args.checkpoint.as_deref().map(path_str),
                output: path_str(&args.out),
            };
            emit(&api.fetch_state(&request).await?)
        }
        Command::Datasets(command) => match command {
            DatasetsCommand::List => emit(&api.list_datasets().await?),
            DatasetsCommand::Show { id } => emit(&api.get_dataset(&id).await?),
            DatasetsCommand::Rm { id } => {
                api.delete_dataset(&id).await?;
                emit(&serde_json::json!({ "deleted": id }))
            }
        },
    }
}

#[tokio::main]
async fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // --help and --version surface as parse "errors" but exit 0.
            use clap::error::ErrorKind as ParseKind;
            let code = match e.kind() {
                ParseKind::DisplayHelp | ParseKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(USAGE_EXIT),
            };
            let _ = e.print();
            return code;
        }
    };
    tracing_subscriber::fmt()
        .with_env_filter(
            tracing_subscriber::EnvFilter::try_from_default_env()
                .unwrap_or_else(|_| tracing_subscriber::EnvFilter::new("warn")),
        )
        .with_writer(std::io::stderr)
        .init();
    match run(cli).await {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}
