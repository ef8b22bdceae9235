//! One handler per endpoint. Heavy replay work runs on the blocking pool;
//! request decoding stays on the async side so malformed input fails fast.

use crate::error::{blocking, ApiError};
use crate::registry::AppState;
use crate::resolve::{
    default_shards, parse_address, parse_amount, parse_denomination, resolve_schedule,
    resolve_scope, resolve_states, resolve_time_index, resolve_transfers, snapshot_from_dto,
};
use axum::extract::{Path as UrlPath, State};
use axum::http::StatusCode;
use axum::Json;
use microvel_client::wire::*;
use microvel_core::analytics::velocity_shares_with_assignment;
use microvel_core::io::csv::{self, load_labels, CsvSink, STATE_HEADER, TRANSFER_HEADER};
use microvel_core::io::fetch::{
    self, FetchOptions, HttpTransport, RpcTransport, StateCsvRow, TransferCsvRow,
};
use microvel_core::io::registry::{state_slots, EventRegistry, STETH_CONTRACT};
use microvel_core::{
    builtin_labels, sample_series, shares_to_tokens, supply_series, tokens_to_shares,
    velocity_shares_by_category, window_average, AccountId, BlockHeight, CategoryTable, CsvError,
    Denomination, FetchError, Provenance, Scope, ScopeFilter, ShareLedger, TransferRecord,
};
use microvel_oracle::GeneratorConfig;
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::sync::Arc;

pub async fn health() -> Json<HealthDto> {
    Json(HealthDto {
        status: "ok".to_string(),
        version: env!("CARGO_PKG_VERSION").to_string(),
    })
}

pub async fn convert(Json(req): Json<ConvertRequest>) -> Result<Json<ConvertResponse>, ApiError> {
    let amount = parse_amount(&req.amount)?;
    let snap = snapshot_from_dto(&req.snapshot)?;
    let pooled = snap.total_pooled_ether()?;
    if pooled.is_zero() {
        return Err(ApiError::data("snapshot has zero pooled ether"));
    }
    let value = match req.direction.as_str() {
        "tokens-to-shares" => tokens_to_shares(amount, &snap)?,
        "shares-to-tokens" => shares_to_tokens(amount, &snap)?,
        other => {
            return Err(ApiError::usage(format!(
                "direction must be \"tokens-to-shares\" or \"shares-to-tokens\", got {other:?}"
            )))
        }
    };
    let rate = microvel_core::amount::decimal_ratio_string(snap.total_shares, pooled, 18);
    Ok(Json(ConvertResponse {
        value: value.to_string(),
        rate,
    }))
}

pub async fn reconstruct(
    State(app): State<AppState>,
    Json(req): Json<ReconstructRequest>,
) -> Result<Json<ReconstructResponse>, ApiError> {
    let tokens = resolve_transfers(
        &app,
        &req.tokens,
        Some(Denomination::Tokens),
        Denomination::Tokens,
    )
    .await?;
    let native = resolve_transfers(
        &app,
        &req.native,
        Some(Denomination::Shares),
        Denomination::Shares,
    )
    .await?;
    let states = resolve_states(&req.state).await?;
    let shards = default_shards(req.shards);

    let output = req.output.clone();
    let ledger = blocking(move || {
        let ledger = microvel_core::reconstruct(&tokens, &native, &states, shards)?;
        if let Some(path) = &output {
            csv::write_share_ledger(Path::new(path), &ledger)?;
        }
        Ok(ledger)
    })
    .await?;

    let native_count = ledger
        .provenance()
        .iter()
        .filter(|p| matches!(p, Provenance::NativeEvent))
        .count();
    let response = ReconstructResponse {
        records: ledger.len(),
        reconstructed: ledger.len() - native_count,
        native: native_count,
        cutover_block: ledger.cutover_block().map(|b| b.0),
        output: req.output,
        dataset: None,
    };
    let dataset = if req.store {
        let stored = app.insert(
            req.dataset_name,
            Denomination::Shares,
            Arc::new(ledger.records().to_vec()),
            None,
        );
        Some(stored.id.clone())
    } else {
        None
    };
    Ok(Json(ReconstructResponse { dataset, ..response }))
}

pub async fn velocity(
    State(app): State<AppState>,
    Json(req): Json<VelocityRequest>,
) -> Result<Json<VelocityResponse>, ApiError> {
    let denomination = parse_denomination(req.denomination.as_deref())?;
    let records = resolve_transfers(&app, &req.source, denomination, Denomination::Shares).await?;
    let schedule = resolve_schedule(req.schedule.as_ref(), &records)?;
    let scope = resolve_scope(req.scope.as_ref())?;
    let shards = default_shards(req.shards);
    if let Some(w) = &req.window {
        if w.width == 0 || w.stride == 0 {
            return Err(ApiError::usage("window width and stride must be positive"));
        }
    } else if req.window_output.is_some() {
        return Err(ApiError::usage("window_output needs a window"));
    }

    let window = req.window.clone();
    let output = req.output.clone();
    let window_output = req.window_output.clone();
    let (samples, windows) = blocking(move || {
        let samples = sample_series(&records, &schedule, &scope, shards)?;
        let windows = window.map(|w| window_average(&samples, w.width, w.stride));
        if let Some(path) = &output {
            csv::write_velocity(Path::new(path), &samples)?;
        }
        if let (Some(path), Some(w)) = (&window_output, &windows) {
            csv::write_windowed(Path::new(path), w)?;
        }
        Ok((samples, windows))
    })
    .await?;

    let sample_dtos = if req.output.is_none() {
        Some(
            samples
                .iter()
                .map(|s| VelocitySampleDto {
                    block: s.at_block.0,
                    scope: s.scope.label(),
                    velocity: s.velocity,
                    money: s.money.to_string(),
                })
                .collect(),
        )
    } else {
        None
    };
    let window_dtos = match (&windows, req.window_output.is_none()) {
        (Some(w), true) => Some(
            w.iter()
                .map(|w| WindowedSampleDto {
                    window_start: w.window_start.0,
                    window_end: w.window_end.0,
                    scope: w.scope.label(),
                    mean_velocity: w.mean_velocity,
                    samples: w.samples,
                })
                .collect(),
        ),
        _ => None,
    };
    Ok(Json(VelocityResponse {
        sample_count: samples.len(),
        samples: sample_dtos,
        windows: window_dtos,
        output: req.output,
        window_output: req.window_output,
    }))
}

fn category_table(bands: Option<&[CategoryBandDto]>) -> Result<CategoryTable, ApiError> {
    match bands {
        None => Ok(CategoryTable::default()),
        Some(list) => Ok(CategoryTable::new(
            list.iter()
                .map(|b| (b.name.clone(), b.lower_bound_tokens))
                .collect(),
        )?),
    }
}

pub async fn decompose(
    State(app): State<AppState>,
    Json(req): Json<DecomposeRequest>,
) -> Result<Json<DecomposeResponse>, ApiError> {
    let denomination = parse_denomination(req.denomination.as_deref())?;
    let records = resolve_transfers(&app, &req.source, denomination, Denomination::Shares).await?;
    let schedule = resolve_schedule(req.schedule.as_ref(), &records)?;
    let table = category_table(req.categories.as_deref())?;
    // Binning by receipts in a different denomination (typically tokens)
    // while the replay itself stays share-denominated.
    let assignment_records = match &req.assignment_source {
        Some(source) => {
            let denom = parse_denomination(req.assignment_denomination.as_deref())?;
            Some(resolve_transfers(&app, source, denom, Denomination::Tokens).await?)
        }
        None => None,
    };

    let output = req.output.clone();
    let samples = blocking(move || {
        let samples = match assignment_records {
            Some(basis) => {
                let assignment = microvel_core::assign_categories(&basis, &table);
                velocity_shares_with_assignment(&records, &schedule, &table, &assignment)?
            }
            None => velocity_shares_by_category(&records, &schedule, &table)?,
        };
        if let Some(path) = &output {
            csv::write_decomposition(Path::new(path), &samples)?;
        }
        Ok(samples)
    })
    .await?;

    let dtos = if req.output.is_none() {
        Some(
            samples
                .iter()
                .map(|s| CategoryShareSampleDto {
                    block: s.at_block.0,
                    shares: s.shares.clone(),
                })
                .collect(),
        )
    } else {
        None
    };
    Ok(Json(DecomposeResponse {
        sample_count: samples.len(),
        samples: dtos,
        output: req.output,
    }))
}

pub async fn balances(
    State(app): State<AppState>,
    Json(req): Json<BalancesRequest>,
) -> Result<Json<BalancesResponse>, ApiError> {
    let denomination = parse_denomination(req.denomination.as_deref())?;
    let records = resolve_transfers(&app, &req.source, denomination, Denomination::Shares).await?;
    let stride = req.stride.unwrap_or(7_200); // one day of 12 s blocks
    if stride == 0 {
        return Err(ApiError::usage("stride must be positive"));
    }
    let time = resolve_time_index(req.time.as_ref()).await?;

    let accounts: Vec<AccountId> = match (&req.accounts, req.top) {
        (Some(_), Some(_)) => {
            return Err(ApiError::usage("accounts and top are mutually exclusive"))
        }
        (Some(list), None) => {
            let parsed: Result<Vec<_>, _> = list.iter().map(|s| parse_address(s)).collect();
            parsed?
        }
        (None, Some(n)) => {
            let last = records
                .last()
                .map(|r| r.block)
                .ok_or_else(|| ApiError::data("empty history has no holders"))?;
            let records = records.clone();
            blocking(move || {
                let top = microvel_core::top_holders(&records, last, n, &[])?;
                Ok(top.into_iter().map(|(a, _)| a).collect())
            })
            .await?
        }
        (None, None) => return Err(ApiError::usage("pick accounts or top")),
    };

    let output = req.output.clone();
    let smoothing = req.smoothing_days;
    let series = blocking(move || {
        let series =
            microvel_core::balance_series(&records, &accounts, stride, smoothing, time.as_ref())?;
        if let Some(path) = &output {
            csv::write_balances(Path::new(path), &series)?;
        }
        Ok(series)
    })
    .await?;

    let dtos = if req.output.is_none() {
        Some(
            series
                .iter()
                .map(|s| BalanceSeriesDto {
                    address: s.account.to_string(),
                    points: s
                        .points
                        .iter()
                        .enumerate()
                        .map(|(i, (b, v))| BalancePointDto {
                            block: b.0,
                            balance: v.to_string(),
                            smoothed: s.smoothed.as_ref().map(|sm| sm[i]),
                        })
                        .collect(),
                })
                .collect(),
        )
    } else {
        None
    };
    Ok(Json(BalancesResponse {
        series_count: series.len(),
        series: dtos,
        output: req.output,
    }))
}

pub async fn holders(
    State(app): State<AppState>,
    Json(req): Json<HoldersRequest>,
) -> Result<Json<HoldersResponse>, ApiError> {
    let denomination = parse_denomination(req.denomination.as_deref())?;
    let records = resolve_transfers(&app, &req.source, denomination, Denomination::Shares).await?;
    let at = match req.at_block {
        Some(b) => BlockHeight(b),
        None => records
            .last()
            .map(|r| r.block)
            .ok_or_else(|| ApiError::data("empty history has no holders"))?,
    };
    let exclude: Vec<AccountId> = match &req.exclude {
        Some(list) => {
            let parsed: Result<Vec<_>, _> = list.iter().map(|s| parse_address(s)).collect();
            parsed?
        }
        None => Vec::new(),
    };

    let mut labels: BTreeMap<AccountId, String> = BTreeMap::new();
    if req.builtin_labels {
        for (a, l) in builtin_labels() {
            labels.insert(a, l.to_string());
        }
    }
    if let Some(path) = &req.labels_path {
        let path = PathBuf::from(path);
        let loaded = blocking(move || Ok(load_labels(&path)?)).await?;
        labels.extend(loaded);
    }

    let count = req.count;
    let output = req.output.clone();
    let label_pairs: Vec<(AccountId, String)> = labels.into_iter().collect();
    let (top, label_pairs) = blocking(move || {
        let top = microvel_core::top_holders(&records, at, count, &exclude)?;
        if let Some(path) = &output {
            let borrowed: Vec<(AccountId, &str)> =
                label_pairs.iter().map(|(a, l)| (*a, l.as_str())).collect();
            csv::write_top_holders(Path::new(path), &top, &borrowed)?;
        }
        Ok((top, label_pairs))
    })
    .await?;

    let labels: BTreeMap<AccountId, String> = label_pairs.into_iter().collect();
    let holders = top
        .iter()
        .enumerate()
        .map(|(i, (a, bal))| HolderDto {
            rank: i + 1,
            address: a.to_string(),
            balance: bal.to_string(),
            label: labels.get(a).cloned(),
        })
        .collect();
    Ok(Json(HoldersResponse {
        holders,
        at_block: at.0,
        output: req.output,
    }))
}

pub async fn wrapped_share(
    State(app): State<AppState>,
    Json(req): Json<WrappedShareRequest>,
) -> Result<Json<WrappedShareResponse>, ApiError> {
    let denomination = parse_denomination(req.denomination.as_deref())?;
    let records = resolve_transfers(&app, &req.source, denomination, Denomination::Shares).await?;
    let wrapper = parse_address(&req.wrapper)?;
    let schedule = resolve_schedule(req.schedule.as_ref(), &records)?;
    let time = resolve_time_index(req.time.as_ref()).await?;
    let smoothing = req.smoothing_days;

    let output = req.output.clone();
    let points = blocking(move || {
        let points = microvel_core::wrapped_share_series(
            &records,
            &wrapper,
            &schedule,
            smoothing,
            time.as_ref(),
        )?;
        if let Some(path) = &output {
            csv::write_wrapped(Path::new(path), &points)?;
        }
        Ok(points)
    })
    .await?;

    let dtos = if req.output.is_none() {
        Some(
            points
                .iter()
                .map(|p| WrappedPointDto {
                    block: p.at_block.0,
                    fraction: p.fraction,
                    smoothed: p.smoothed,
                })
                .collect(),
        )
    } else {
        None
    };
    Ok(Json(WrappedShareResponse {
        point_count: points.len(),
        points: dtos,
        output: req.output,
    }))
}

pub async fn supply(
    State(app): State<AppState>,
    Json(req): Json<SupplyRequest>,
) -> Result<Json<SupplyResponse>, ApiError> {
    let states = resolve_states(&req.state).await?;
    let ledger_records: Vec<TransferRecord> = match &req.ledger {
        Some(source) => {
            let denomination = parse_denomination(req.denomination.as_deref())?;
            let records =
                resolve_transfers(&app, source, denomination, Denomination::Shares).await?;
            records.to_vec()
        }
        None => Vec::new(),
    };
    // No schedule defaults to the series' own span, not the ledger's.
    let schedule = match &req.schedule {
        Some(s) => resolve_schedule(Some(s), &[])?,
        None => Vec::new(),
    };

    let output = req.output.clone();
    let points = blocking(move || {
        let ledger = ShareLedger::from_native(ledger_records)?;
        let points = supply_series(&states, &ledger, &schedule)?;
        if let Some(path) = &output {
            csv::write_supply(Path::new(path), &points)?;
        }
        Ok(points)
    })
    .await?;

    let dtos = if req.output.is_none() {
        Some(
            points
                .iter()
                .map(|p| SupplyPointDto {
                    block: p.block.0,
                    total_shares: p.total_shares.to_string(),
                    total_pooled_ether: p.total_pooled_ether.to_string(),
                    conversion_rate: p.conversion_rate.clone(),
                })
                .collect(),
        )
    } else {
        None
    };
    Ok(Json(SupplyResponse {
        point_count: points.len(),
        points: dtos,
        output: req.output,
    }))
}

fn merged_config(dto: &GeneratorConfigDto) -> GeneratorConfig {
    let mut cfg = GeneratorConfig::default();
    if let Some(v) = dto.seed {
        cfg.seed = v;
    }
    if let Some(v) = dto.accounts {
        cfg.accounts = v;
    }
    if let Some(v) = dto.transfers {
        cfg.transfers = v;
    }
    if let Some(v) = dto.start_block {
        cfg.start_block = v;
    }
    if let Some(v) = dto.end_block {
        cfg.end_block = v;
    }
    if let Some(v) = dto.mint_fraction {
        cfg.mint_fraction = v;
    }
    if let Some(v) = dto.min_value_bits {
        cfg.min_value_bits = v;
    }
    if let Some(v) = dto.max_value_bits {
        cfg.max_value_bits = v;
    }
    if let Some(v) = dto.whale_fraction {
        cfg.whale_fraction = v;
    }
    if let Some(v) = dto.reward_rate_ppm {
        cfg.reward_rate_ppm = v;
    }
    if let Some(v) = dto.rebase_period_blocks {
        cfg.rebase_period_blocks = v;
    }
    cfg
}

pub async fn generate(
    State(app): State<AppState>,
    Json(req): Json<GenerateRequest>,
) -> Result<Json<GenerateResponse>, ApiError> {
    let cfg = merged_config(&req.config);
    let transfers_output = req.transfers_output.clone();
    let state_output = req.state_output.clone();
    let (records, states) = blocking(move || {
        let (records, states) = microvel_oracle::generate(&cfg)?;
        if let Some(path) = &transfers_output {
            csv::write_transfers(Path::new(path), &records)?;
        }
        if let Some(path) = &state_output {
            csv::write_state(Path::new(path), &states)?;
        }
        Ok((records, states))
    })
    .await?;

    let cfg = merged_config(&req.config);
    let mut response = GenerateResponse {
        records: records.len(),
        snapshots: states.len(),
        algorithm: cfg.algorithm().to_string(),
        seed: cfg.seed,
        first_block: records.first().map(|r| r.block.0),
        last_block: records.last().map(|r| r.block.0),
        transfers_output: req.transfers_output,
        state_output: req.state_output,
        dataset: None,
    };
    if req.store {
        let stored = app.insert(
            req.dataset_name,
            Denomination::Shares,
            Arc::new(records),
            Some(Arc::new(states)),
        );
        response.dataset = Some(stored.id.clone());
    }
    Ok(Json(response))
}

pub async fn selfcheck(
    Json(req): Json<SelfcheckRequest>,
) -> Result<Json<SelfcheckResponse>, ApiError> {
    let ledgers = req.ledgers.unwrap_or(50);
    let accounts = req.accounts.unwrap_or(30);
    let transfers = req.transfers.unwrap_or(800);
    let base_seed = req.base_seed.unwrap_or(0);
    let tolerance = req.tolerance.unwrap_or(1e-12);
    if !(tolerance > 0.0) {
        return Err(ApiError::usage("tolerance must be positive"));
    }

    let (comparisons, max_relative_error) = blocking(move || {
        let mut comparisons = 0u64;
        let mut worst = 0.0f64;
        for i in 0..ledgers {
            let cfg = GeneratorConfig {
                seed: base_seed.wrapping_add(i as u64),
                accounts,
                transfers,
                ..GeneratorConfig::default()
            };
            let (records, _states) = microvel_oracle::generate(&cfg)?;
            let Some(last) = records.last().map(|r| r.block.0) else {
                continue;
            };
            // At the frontier (fresh parcels), shortly after, and deep into
            // pure decay.
            for t in [last, last + 211, last + 9_973] {
                let at = BlockHeight(t);
                let engine = sample_series(&records, &[at], &ScopeFilter::All, 1)?;
                let reference = microvel_oracle::oracle_account_velocities(&records, t);
                let global_ref = microvel_oracle::oracle_global_velocity(&records, t)?;
                if engine.len() != reference.len() + 1 {
                    // Funded-account sets disagree; force a failure the
                    // caller can see rather than skipping silently.
                    worst = f64::INFINITY;
                    continue;
                }
                for sample in &engine {
                    let want = match &sample.scope {
                        Scope::Global => global_ref,
                        Scope::Account(a) => match reference.get(a) {
                            Some(v) => *v,
                            None => {
                                worst = f64::INFINITY;
                                continue;
                            }
                        },
                    };
                    let rel = (sample.velocity - want).abs() / want.abs();
                    worst = worst.max(rel);
                    comparisons += 1;
                }
            }
        }
        Ok((comparisons, worst))
    })
    .await?;

    Ok(Json(SelfcheckResponse {
        ledgers,
        comparisons,
        max_relative_error,
        tolerance,
        pass: max_relative_error <= tolerance,
    }))
}

fn resolve_topic(event: Option<&str>) -> Result<String, ApiError> {
    let registry = EventRegistry::default();
    let name = event.unwrap_or("transfer");
    if let Some(topic) = registry.topic(name) {
        return Ok(topic.to_string());
    }
    if name.starts_with("0x") && name.len() == 66 {
        return Ok(name.to_string());
    }
    let known: Vec<&str> = registry.names().collect();
    Err(ApiError::usage(format!(
        "event must be one of {known:?} or a 0x topic hash, got {name:?}"
    )))
}

fn fetch_options(
    page_size: Option<u64>,
    concurrency: Option<usize>,
    max_attempts: Option<u32>,
    backoff_ms: Option<u64>,
    checkpoint: Option<&str>,
) -> Result<FetchOptions, ApiError> {
    let mut opts = FetchOptions::default();
    if let Some(p) = page_size {
        if p == 0 {
            return Err(ApiError::usage("page_size must be positive"));
        }
        opts.page_size = p;
    }
    if let Some(c) = concurrency {
        if c == 0 {
            return Err(ApiError::usage("concurrency must be positive"));
        }
        opts.concurrency = c;
    }
    if let Some(a) = max_attempts {
        if a == 0 {
            return Err(ApiError::usage("max_attempts must be positive"));
        }
        opts.max_attempts = a;
    }
    if let Some(b) = backoff_ms {
        opts.backoff_ms = b;
    }
    opts.checkpoint = checkpoint.map(PathBuf::from);
    Ok(opts)
}

/// Opens the output for a fetch. A fresh run truncates and writes the
/// header; a resume (checkpoint and output both present) appends, so rows
/// already committed survive.
fn open_fetch_sink(output: &Path, opts: &FetchOptions, header: [&str; 6]) -> Result<CsvSink, CsvError> {
    let resuming = opts
        .checkpoint
        .as_deref()
        .map(|c| c.exists() && output.exists())
        .unwrap_or(false);
    if resuming {
        CsvSink::append(output)
    } else {
        let mut sink = CsvSink::create(output)?;
        sink.write_record(header)?;
        Ok(sink)
    }
}

pub async fn fetch_logs(
    Json(req): Json<FetchLogsRequest>,
) -> Result<Json<FetchSummaryDto>, ApiError> {
    let topic = resolve_topic(req.event.as_deref())?;
    let contract = req.contract.as_deref().unwrap_or(STETH_CONTRACT).to_string();
    let opts = fetch_options(
        req.page_size,
        req.concurrency,
        req.max_attempts,
        req.backoff_ms,
        req.checkpoint.as_deref(),
    )?;
    let output = PathBuf::from(&req.output);
    let mut sink = open_fetch_sink(&output, &opts, TRANSFER_HEADER)?;
    let transport: Arc<dyn RpcTransport> = Arc::new(HttpTransport::new(req.rpc_url));

    let mut write = |row: TransferCsvRow| -> Result<(), FetchError> {
        sink.write_record([
            row.block_number.to_string(),
            row.log_index.to_string(),
            row.tx_hash,
            row.from_address,
            row.to_address,
            row.value,
        ])?;
        Ok(())
    };
    let ran = fetch::fetch_logs(
        transport,
        &contract,
        &topic,
        req.from_block,
        req.to_block,
        &opts,
        &mut write,
    )
    .await;
    // Close the file even when the fetch died mid-range: rows committed
    // before the failure are what a rerun resumes from.
    let closed = sink.finish();
    let summary = ran?;
    closed?;
    tracing::info!(rows = summary.rows, output = %req.output, "log fetch finished");
    Ok(Json(FetchSummaryDto {
        rows: summary.rows,
        completed_through: summary.completed_through,
        output: req.output,
    }))
}

pub async fn fetch_state(
    Json(req): Json<FetchStateRequest>,
) -> Result<Json<FetchSummaryDto>, ApiError> {
    if req.stride == 0 {
        return Err(ApiError::usage("stride must be positive"));
    }
    let contract = req.contract.as_deref().unwrap_or(STETH_CONTRACT).to_string();
    let opts = fetch_options(None, None, req.max_attempts, req.backoff_ms, req.checkpoint.as_deref())?;
    let output = PathBuf::from(&req.output);
    let mut sink = open_fetch_sink(&output, &opts, STATE_HEADER)?;
    let transport: Arc<dyn RpcTransport> = Arc::new(HttpTransport::new(req.rpc_url));
    // Field order matches the storage-slot registry.
    debug_assert_eq!(STATE_HEADER[1], state_slots()[0].0);

    let mut write = |row: StateCsvRow| -> Result<(), FetchError> {
        sink.write_record([
            row.block_number.to_string(),
            row.deposited_validators,
            row.beacon_validators,
            row.beacon_balance,
            row.buffered_ether,
            row.total_shares,
        ])?;
        Ok(())
    };
    let ran = fetch::fetch_state(
        transport,
        &contract,
        req.from_block,
        req.to_block,
        req.stride,
        &opts,
        &mut write,
    )
    .await;
    let closed = sink.finish();
    let summary = ran?;
    closed?;
    tracing::info!(rows = summary.rows, output = %req.output, "state fetch finished");
    Ok(Json(FetchSummaryDto {
        rows: summary.rows,
        completed_through: summary.completed_through,
        output: req.output,
    }))
}

pub async fn create_dataset(
    State(app): State<AppState>,
    Json(req): Json<CreateDatasetRequest>,
) -> Result<Json<DatasetDto>, ApiError> {
    let requested = parse_denomination(req.denomination.as_deref())?;
    let records =
        resolve_transfers(&app, &req.transfers, requested, Denomination::Shares).await?;
    // Records carry their denomination; trust them over the request field
    // so a dataset copied from a dataset keeps its meaning.
    let denomination = records
        .first()
        .map(|r| r.denomination)
        .or(requested)
        .unwrap_or(Denomination::Shares);
    let states = match &req.state {
        Some(source) => Some(resolve_states(source).await?),
        None => None,
    };
    let stored = app.insert(req.name, denomination, records, states);
    Ok(Json(stored.describe()))
}

pub async fn list_datasets(State(app): State<AppState>) -> Json<DatasetListResponse> {
    Json(DatasetListResponse {
        datasets: app.list(),
    })
}

pub async fn get_dataset(
    State(app): State<AppState>,
    UrlPath(id): UrlPath<String>,
) -> Result<Json<DatasetDto>, ApiError> {
    app.get(&id)
        .map(|d| Json(d.describe()))
        .ok_or_else(|| ApiError::not_found(format!("no dataset {id}")))
}

pub async fn delete_dataset(
    State(app): State<AppState>,
    UrlPath(id): UrlPath<String>,
) -> Result<StatusCode, ApiError> {
    if app.remove(&id) {
        Ok(StatusCode::NO_CONTENT)
    } else {
        Err(ApiError::not_found(format!("no dataset {id}")))
    }
}
