//! Error types shared across the crate.

use thiserror::Error;

use crate::account::AccountId;

/// Errors from snapshot-level arithmetic (pooled ether, share price,
/// token/share conversion).
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LedgerError {
    #[error("invalid snapshot at block {block}: deposited_validators {deposited} < beacon_validators {beacon}")]
    InvalidSnapshot {
        block: u64,
        deposited: u64,
        beacon: u64,
    },
    #[error("total_shares is zero in snapshot at block {0}")]
    ZeroShares(u64),
    #[error("total pooled ether is zero in snapshot at block {0}")]
    ZeroPool(u64),
    #[error("256-bit overflow in {0}")]
    Overflow(&'static str),
    #[error("not a valid unsigned decimal amount: {0:?}")]
    BadAmount(String),
}

/// Errors raised while replaying a transfer sequence.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ReplayError {
    #[error("insufficient balance at block {block} log {log_index}: {from} holds {balance}, transfer needs {value}")]
    InsufficientBalance {
        block: u64,
        log_index: u64,
        from: String,
        balance: String,
        value: String,
    },
    #[error("records out of order: ({prev_block},{prev_log}) followed by ({block},{log_index})")]
    NonMonotonicBlock {
        prev_block: u64,
        prev_log: u64,
        block: u64,
        log_index: u64,
    },
    #[error("account {account} holds nothing at block {block}; velocity is undefined")]
    EmptyAccount { account: AccountId, block: u64 },
    #[error("no circulating supply at block {0}")]
    ZeroSupply(u64),
    #[error("schedule block {sample} precedes already-applied block {applied}")]
    ScheduleBehindReplay { sample: u64, applied: u64 },
}

/// Errors from share-ledger reconstruction and supply sampling.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ReconstructError {
    #[error("no state snapshot at or before block {0}")]
    MissingState(u64),
    #[error("token transfer at block {0} precedes the first deposit (pooled ether is zero)")]
    ZeroPoolAtTransfer(u64),
    #[error("{input} input out of order: ({prev_block},{prev_log}) followed by ({block},{log_index})")]
    UnorderedInput {
        input: &'static str,
        prev_block: u64,
        prev_log: u64,
        block: u64,
        log_index: u64,
    },
    #[error("{input} input carries a record in the wrong denomination at block {block} log {log_index}")]
    WrongDenomination {
        input: &'static str,
        block: u64,
        log_index: u64,
    },
    #[error(transparent)]
    Ledger(#[from] LedgerError),
}

/// Errors from analytics passes (categories, balance series, wrapped share).
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AnalyticsError {
    #[error("day-based smoothing requested without a block-time index")]
    MissingTimeIndex,
    #[error(transparent)]
    Replay(#[from] ReplayError),
}

/// CSV schema / parse errors, with enough context to point at the input.
#[derive(Debug, Error)]
pub enum CsvError {
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("line {line}: {msg}")]
    Parse { line: u64, msg: String },
    #[error("duplicate record key (block {block}, log_index {log_index})")]
    DuplicateKey { block: u64, log_index: u64 },
    #[error("required column {0:?} missing from header")]
    MissingColumn(String),
}

impl From<csv::Error> for CsvError {
    fn from(e: csv::Error) -> Self {
        let line = match e.position() {
            Some(p) => p.line(),
            None => 0,
        };
        match e.into_kind() {
            csv::ErrorKind::Io(io) => CsvError::Io(io),
            other => CsvError::Parse {
                line,
                msg: format!("{other:?}"),
            },
        }
    }
}

/// Errors from the JSON-RPC fetchers.
#[derive(Debug, Error)]
pub enum FetchError {
    #[error("rpc failure after {attempts} attempts: {msg}")]
    Rpc { attempts: u32, msg: String },
    #[error("malformed log entry: {0}")]
    Decode(String),
    #[error("historical state for block {block} unavailable; an archive-capable endpoint is required ({msg})")]
    ArchiveRequired { block: u64, msg: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] CsvError),
}

/// Configuration validation errors. The field name is part of the message
/// so a failing run names what to fix.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("invalid config field {field:?}: {msg}")]
pub struct ConfigError {
    pub field: &'static str,
    pub msg: String,
}

impl ConfigError {
    pub fn new(field: &'static str, msg: impl Into<String>) -> Self {
        ConfigError {
            field,
            msg: msg.into(),
        }
    }
}
