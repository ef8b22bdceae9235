//! Request decoding: wire shapes into core types, with usage/data errors
//! that tell the caller which field to fix.

use crate::error::{blocking, ApiError};
use crate::registry::AppState;
use microvel_client::wire::{
    ScheduleDto, ScopeDto, SnapshotDto, SourceDto, StateSourceDto, TimeIndexDto, TransferDto,
};
use microvel_core::io::csv::{load_state, load_time_points, load_transfers};
use microvel_core::{
    first_order_violation, AccountId, BlockHeight, BlockTimeIndex, Denomination,
    LidoStateSnapshot, ScopeFilter, StateSeries, TokenAmount, TransferRecord,
};
use std::path::PathBuf;
use std::sync::Arc;

pub fn parse_address(raw: &str) -> Result<AccountId, ApiError> {
    raw.parse()
        .map_err(|e| ApiError::usage(format!("bad address {raw:?}: {e}")))
}

pub fn parse_amount(raw: &str) -> Result<TokenAmount, ApiError> {
    raw.parse()
        .map_err(|e| ApiError::usage(format!("bad amount {raw:?}: {e}")))
}

/// Denomination of a path/inline source; `None` means share-denominated.
pub fn parse_denomination(raw: Option<&str>) -> Result<Option<Denomination>, ApiError> {
    raw.map(|s| {
        s.parse()
            .map_err(|e| ApiError::usage(format!("bad denomination {s:?}: {e}")))
    })
    .transpose()
}

pub fn snapshot_from_dto(dto: &SnapshotDto) -> Result<LidoStateSnapshot, ApiError> {
    Ok(LidoStateSnapshot {
        block: BlockHeight(dto.block),
        deposited_validators: dto.deposited_validators,
        beacon_validators: dto.beacon_validators,
        beacon_balance: parse_amount(&dto.beacon_balance)?,
        buffered_ether: parse_amount(&dto.buffered_ether)?,
        total_shares: parse_amount(&dto.total_shares)?,
    })
}

fn record_from_dto(dto: &TransferDto, denomination: Denomination) -> Result<TransferRecord, ApiError> {
    Ok(TransferRecord {
        block: BlockHeight(dto.block),
        log_index: dto.log_index,
        from: parse_address(&dto.from)?,
        to: parse_address(&dto.to)?,
        value: parse_amount(&dto.value)?,
        denomination,
    })
}

/// Materializes a transfer source. `requested` comes from the request's
/// denomination field and must match a dataset's stored denomination;
/// `default` fills in when the request said nothing.
pub async fn resolve_transfers(
    app: &AppState,
    source: &SourceDto,
    requested: Option<Denomination>,
    default: Denomination,
) -> Result<Arc<Vec<TransferRecord>>, ApiError> {
    match source {
        SourceDto::Dataset { dataset } => {
            let stored = app
                .get(dataset)
                .ok_or_else(|| ApiError::not_found(format!("no dataset {dataset}")))?;
            if let Some(want) = requested {
                if want != stored.denomination {
                    return Err(ApiError::usage(format!(
                        "dataset {dataset} is {}-denominated, not {}",
                        stored.denomination.as_str(),
                        want.as_str()
                    )));
                }
            }
            Ok(stored.records.clone())
        }
        SourceDto::Path { path } => {
            let denomination = requested.unwrap_or(default);
            let path = PathBuf::from(path);
            blocking(move || Ok(Arc::new(load_transfers(&path, denomination)?))).await
        }
        SourceDto::Inline { records } => {
            let denomination = requested.unwrap_or(default);
            let mut out = Vec::with_capacity(records.len());
            for dto in records {
                out.push(record_from_dto(dto, denomination)?);
            }
            out.sort_by_key(|r| r.key());
            if let Some(v) = first_order_violation(&out) {
                return Err(ApiError::usage(format!(
                    "inline records contain duplicate key {v:?}"
                )));
            }
            Ok(Arc::new(out))
        }
    }
}

/// Dataset-stored snapshot series (when the source is a dataset that has
/// one) or a loaded/inline series.
pub async fn resolve_states(source: &StateSourceDto) -> Result<Arc<StateSeries>, ApiError> {
    match source {
        StateSourceDto::Path { path } => {
            let path = PathBuf::from(path);
            blocking(move || Ok(Arc::new(load_state(&path)?))).await
        }
        StateSourceDto::Inline { snapshots } => {
            let snaps: Result<Vec<_>, _> = snapshots.iter().map(snapshot_from_dto).collect();
            Ok(Arc::new(StateSeries::new(snaps?)))
        }
    }
}

/// Expands the schedule. With no schedule, samples once at the last
/// record's block — the "current value" convention.
pub fn resolve_schedule(
    schedule: Option<&ScheduleDto>,
    records: &[TransferRecord],
) -> Result<Vec<BlockHeight>, ApiError> {
    let mut blocks = match schedule {
        None => {
            let last = records
                .last()
                .ok_or_else(|| ApiError::data("empty history has no default sample block"))?;
            return Ok(vec![last.block]);
        }
        Some(ScheduleDto::Blocks(list)) => {
            if list.is_empty() {
                return Err(ApiError::usage("schedule block list is empty"));
            }
            list.clone()
        }
        Some(ScheduleDto::Range { start, end, stride }) => {
            if stride == &0 {
                return Err(ApiError::usage("schedule stride must be positive"));
            }
            if end < start {
                return Err(ApiError::usage(format!(
                    "schedule range [{start}, {end}] is inverted"
                )));
            }
            (*start..=*end).step_by(*stride as usize).collect()
        }
    };
    blocks.sort_unstable();
    blocks.dedup();
    Ok(blocks.into_iter().map(BlockHeight).collect())
}

pub fn resolve_scope(scope: Option<&ScopeDto>) -> Result<ScopeFilter, ApiError> {
    match scope {
        None => Ok(ScopeFilter::Global),
        Some(ScopeDto::Keyword(word)) => match word.as_str() {
            "global" => Ok(ScopeFilter::Global),
            "all" => Ok(ScopeFilter::All),
            other => Err(ApiError::usage(format!(
                "scope must be \"global\", \"all\", or an address list, got {other:?}"
            ))),
        },
        Some(ScopeDto::Accounts(list)) => {
            if list.is_empty() {
                return Err(ApiError::usage("scope address list is empty"));
            }
            let accounts: Result<Vec<_>, _> =
                list.iter().map(|s| parse_address(s)).collect();
            Ok(ScopeFilter::Accounts(accounts?))
        }
    }
}

/// Builds a block→time mapping from whichever calibration the request
/// carried: explicit points (inline or CSV) beat the affine description.
pub async fn resolve_time_index(
    dto: Option<&TimeIndexDto>,
) -> Result<Option<BlockTimeIndex>, ApiError> {
    let Some(dto) = dto else { return Ok(None) };
    if let Some(path) = &dto.points_path {
        let path = PathBuf::from(path);
        let points = blocking(move || Ok(load_time_points(&path)?)).await?;
        return Ok(Some(BlockTimeIndex::from_points(points)?));
    }
    if let Some(points) = &dto.points {
        return Ok(Some(BlockTimeIndex::from_points(points.clone())?));
    }
    if dto.genesis_timestamp.is_some() || dto.seconds_per_block.is_some() {
        return Ok(Some(BlockTimeIndex::affine(
            dto.genesis_timestamp.unwrap_or(0),
            dto.seconds_per_block
                .unwrap_or(microvel_core::analytics::DEFAULT_SECONDS_PER_BLOCK),
        )?));
    }
    Err(ApiError::usage(
        "time index needs points, points_path, or an affine description",
    ))
}

/// Worker count when the request didn't pin one.
pub fn default_shards(requested: Option<usize>) -> usize {
    requested
        .filter(|n| *n > 0)
        .unwrap_or_else(|| {
            std::thread::available_parallelism()
                .map(|n| n.get())
                .unwrap_or(1)
        })
}
