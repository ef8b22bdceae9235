//! Best-effort node client: paginated event-log fetching and historical
//! state reads over JSON-RPC, with retries, bounded concurrency and a
//! resumable checkpoint. Everything is fixture-tested; nothing else in
//! the pipeline depends on a live endpoint.

use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;
use std::time::Duration;

use async_trait::async_trait;
use serde_json::{json, Value};

use crate::amount::TokenAmount;
use crate::error::FetchError;
use crate::io::registry::state_slots;

/// One JSON-RPC call. Implemented over HTTP for real nodes and by canned
/// fixtures in tests.
#[async_trait]
pub trait RpcTransport: Send + Sync {
    async fn call(&self, method: &str, params: Value) -> Result<Value, FetchError>;
}

/// JSON-RPC 2.0 over HTTP.
pub struct HttpTransport {
    client: reqwest::Client,
    url: String,
    next_id: AtomicU64,
}

impl HttpTransport {
    pub fn new(url: impl Into<String>) -> Self {
        HttpTransport {
            client: reqwest::Client::builder()
                .timeout(Duration::from_secs(30))
                .build()
                .expect("default TLS-less client builds"),
            url: url.into(),
            next_id: AtomicU64::new(1),
        }
    }
}

#[async_trait]
impl RpcTransport for HttpTransport {
    async fn call(&self, method: &str, params: Value) -> Result<Value, FetchError> {
        let id = self.next_id.fetch_add(1, Ordering::Relaxed);
        let body = json!({ "jsonrpc": "2.0", "id": id, "method": method, "params": params });
        let resp = self
            .client
            .post(&self.url)
            .json(&body)
            .send()
            .await
            .map_err(|e| FetchError::Rpc {
                attempts: 1,
                msg: format!("transport: {e}"),
            })?;
        let status = resp.status();
        if !status.is_success() {
            return Err(FetchError::Rpc {
                attempts: 1,
                msg: format!("http status {status}"),
            });
        }
        let envelope: Value = resp.json().await.map_err(|e| FetchError::Rpc {
            attempts: 1,
            msg: format!("invalid response body: {e}"),
        })?;
        if let Some(err) = envelope.get("error").filter(|e| !e.is_null()) {
            return Err(FetchError::Rpc {
                attempts: 1,
                msg: err
                    .get("message")
                    .and_then(Value::as_str)
                    .unwrap_or("unnamed node error")
                    .to_string(),
            });
        }
        envelope
            .get("result")
            .cloned()
            .ok_or_else(|| FetchError::Decode("response without result".to_string()))
    }
}

/// Fetch tuning knobs. `checkpoint` names a file holding the last fully
/// committed block as a single decimal line; an existing checkpoint makes
/// a rerun resume after it.
#[derive(Clone, Debug)]
pub struct FetchOptions {
    /// Blocks per log query page.
    pub page_size: u64,
    /// In-flight page requests; commits stay strictly ordered.
    pub concurrency: usize,
    /// Attempts per request before giving up.
    pub max_attempts: u32,
    /// Base backoff, doubled per failed attempt.
    pub backoff_ms: u64,
    pub checkpoint: Option<PathBuf>,
}

impl Default for FetchOptions {
    fn default() -> Self {
        FetchOptions {
            page_size: 2_000,
            concurrency: 4,
            max_attempts: 5,
            backoff_ms: 500,
            checkpoint: None,
        }
    }
}

/// A decoded transfer-style log, ready for CSV serialization.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransferCsvRow {
    pub block_number: u64,
    pub log_index: u64,
    pub tx_hash: String,
    pub from_address: String,
    pub to_address: String,
    pub value: String,
}

/// One sampled state row, values as decimal strings.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StateCsvRow {
    pub block_number: u64,
    pub deposited_validators: String,
    pub beacon_validators: String,
    pub beacon_balance: String,
    pub buffered_ether: String,
    pub total_shares: String,
}

/// What a fetch run processed (rows may be zero on an empty range).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct FetchSummary {
    pub rows: u64,
    /// Last block committed to the checkpoint (None when nothing ran).
    pub completed_through: Option<u64>,
}

fn read_checkpoint(path: &Path) -> Result<Option<u64>, FetchError> {
    match std::fs::read_to_string(path) {
        Ok(text) => text
            .trim()
            .parse::<u64>()
            .map(Some)
            .map_err(|e| FetchError::Decode(format!("corrupt checkpoint {path:?}: {e}"))),
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(None),
        Err(e) => Err(e.into()),
    }
}

fn write_checkpoint(path: &Path, block: u64) -> Result<(), FetchError> {
    std::fs::write(path, format!("{block}\n"))?;
    Ok(())
}

fn hex_quantity(v: &Value, what: &str) -> Result<u64, FetchError> {
    let s = v
        .as_str()
        .ok_or_else(|| FetchError::Decode(format!("{what}: expected hex string, got {v}")))?;
    let digits = s
        .strip_prefix("0x")
        .or_else(|| s.strip_prefix("0X"))
        .ok_or_else(|| FetchError::Decode(format!("{what}: missing 0x in {s:?}")))?;
    u64::from_str_radix(digits, 16)
        .map_err(|e| FetchError::Decode(format!("{what}: bad hex {s:?}: {e}")))
}

/// Decodes a 0x-prefixed hex string of at most 32 bytes into a 256-bit
/// word; shorter inputs are left-padded.
fn hex_word(s: &str, what: &str) -> Result<[u8; 32], FetchError> {
    let digits = s
        .strip_prefix("0x")
        .or_else(|| s.strip_prefix("0X"))
        .ok_or_else(|| FetchError::Decode(format!("{what}: missing 0x in {s:?}")))?;
    if digits.len() > 64 {
        return Err(FetchError::Decode(format!(
            "{what}: {} hex digits exceed one word",
            digits.len()
        )));
    }
    let mut out = [0u8; 32];
    // walk nibbles right to left into the low bytes
    for (i, b) in digits.bytes().rev().enumerate() {
        let nibble = match b {
            b'0'..=b'9' => b - b'0',
            b'a'..=b'f' => b - b'a' + 10,
            b'A'..=b'F' => b - b'A' + 10,
            _ => {
                return Err(FetchError::Decode(format!(
                    "{what}: non-hex byte {:?} in {s:?}",
                    b as char
                )))
            }
        };
        out[31 - i / 2] |= nibble << (4 * (i % 2) as u8);
    }
    Ok(out)
}

fn word_to_address(s: &str, what: &str) -> Result<String, FetchError> {
    let word = hex_word(s, what)?;
    let mut out = String::with_capacity(42);
    out.push_str("0x");
    for b in &word[12..] {
        out.push_str(&format!("{b:02x}"));
    }
    Ok(out)
}

fn word_to_decimal(s: &str, what: &str) -> Result<String, FetchError> {
    Ok(TokenAmount::from_be_bytes(hex_word(s, what)?).to_string())
}

fn decode_log(log: &Value) -> Result<Option<TransferCsvRow>, FetchError> {
    if log.get("removed").and_then(Value::as_bool) == Some(true) {
        return Ok(None);
    }
    let topics = log
        .get("topics")
        .and_then(Value::as_array)
        .ok_or_else(|| FetchError::Decode("log without topics".to_string()))?;
    if topics.len() < 3 {
        return Err(FetchError::Decode(format!(
            "transfer log needs 3 topics, found {}",
            topics.len()
        )));
    }
    let topic_str = |i: usize| -> Result<&str, FetchError> {
        topics[i]
            .as_str()
            .ok_or_else(|| FetchError::Decode(format!("topic {i} is not a string")))
    };
    let data = log.get("data").and_then(Value::as_str).unwrap_or("0x");
    Ok(Some(TransferCsvRow {
        block_number: hex_quantity(
            log.get("blockNumber").unwrap_or(&Value::Null),
            "blockNumber",
        )?,
        log_index: hex_quantity(log.get("logIndex").unwrap_or(&Value::Null), "logIndex")?,
        tx_hash: log
            .get("transactionHash")
            .and_then(Value::as_str)
            .unwrap_or("")
            .to_string(),
        from_address: word_to_address(topic_str(1)?, "from topic")?,
        to_address: word_to_address(topic_str(2)?, "to topic")?,
        value: word_to_decimal(data, "log data")?,
    }))
}

async fn call_with_retry(
    transport: &dyn RpcTransport,
    method: &str,
    params: Value,
    opts: &FetchOptions,
) -> Result<Value, FetchError> {
    let mut attempt = 0u32;
    loop {
        attempt += 1;
        match transport.call(method, params.clone()).await {
            Ok(v) => return Ok(v),
            Err(FetchError::Rpc { msg, .. }) => {
                if attempt >= opts.max_attempts {
                    return Err(FetchError::Rpc {
                        attempts: attempt,
                        msg,
                    });
                }
                let delay = opts.backoff_ms.saturating_mul(1 << (attempt - 1).min(16));
                tokio::time::sleep(Duration::from_millis(delay)).await;
            }
            Err(other) => return Err(other),
        }
    }
}

struct PagePlan {
    lo: u64,
    hi: u64,
}

fn plan_pages(from: u64, to: u64, page_size: u64, resume_after: Option<u64>) -> Vec<PagePlan> {
    let page_size = page_size.max(1);
    let start = match resume_after {
        Some(done) if done >= to => return Vec::new(),
        Some(done) => done.saturating_add(1).max(from),
        None => from,
    };
    let mut pages = Vec::new();
    let mut lo = start;
    while lo <= to {
        let hi = lo.saturating_add(page_size - 1).min(to);
        pages.push(PagePlan { lo, hi });
        if hi == u64::MAX {
            break;
        }
        lo = hi + 1;
    }
    pages
}

/// Fetches and decodes transfer-style logs for `contract`/`topic0` over
/// `[from_block, to_block]`, feeding rows to `sink` in (page, log) order.
/// Pages run concurrently but commit in order: rows first, then the
/// checkpoint, so a killed run resumes without loss or duplication.
pub async fn fetch_logs(
    transport: Arc<dyn RpcTransport>,
    contract: &str,
    topic0: &str,
    from_block: u64,
    to_block: u64,
    opts: &FetchOptions,
    sink: &mut (dyn FnMut(TransferCsvRow) -> Result<(), FetchError> + Send),
) -> Result<FetchSummary, FetchError> {
    if from_block > to_block {
        return Err(FetchError::Decode(format!(
            "empty range: from {from_block} > to {to_block}"
        )));
    }
    let resume_after = match &opts.checkpoint {
        Some(p) => read_checkpoint(p)?,
        None => None,
    };
    let pages = plan_pages(from_block, to_block, opts.page_size, resume_after);

    let mut summary = FetchSummary {
        rows: 0,
        completed_through: resume_after,
    };
    let mut inflight: std::collections::VecDeque<(u64, tokio::task::JoinHandle<Result<Vec<TransferCsvRow>, FetchError>>)> =
        std::collections::VecDeque::new();
    let mut next = 0usize;
    let concurrency = opts.concurrency.max(1);

    loop {
        while inflight.len() < concurrency && next < pages.len() {
            let PagePlan { lo, hi } = pages[next];
            next += 1;
            let transport = Arc::clone(&transport);
            let contract = contract.to_string();
            let topic = topic0.to_string();
            let opts = opts.clone();
            inflight.push_back((
                hi,
                tokio::spawn(async move {
                    let params = json!([{
                        "fromBlock": format!("0x{lo:x}"),
                        "toBlock": format!("0x{hi:x}"),
                        "address": contract,
                        "topics": [topic],
                    }]);
                    let result =
                        call_with_retry(transport.as_ref(), "eth_getLogs", params, &opts).await?;
                    let logs = result.as_array().ok_or_else(|| {
                        FetchError::Decode("eth_getLogs result is not an array".to_string())
                    })?;
                    let mut rows = Vec::with_capacity(logs.len());
                    for log in logs {
                        if let Some(row) = decode_log(log)? {
                            rows.push(row);
                        }
                    }
                    rows.sort_by_key(|r| (r.block_number, r.log_index));
                    Ok(rows)
                }),
            ));
        }
        let Some((hi, handle)) = inflight.pop_front() else {
            break;
        };
        let rows = handle.await.map_err(|e| FetchError::Rpc {
            attempts: 1,
            msg: format!("worker failed: {e}"),
        })??;
        for row in rows {
            summary.rows += 1;
            sink(row)?;
        }
        if let Some(p) = &opts.checkpoint {
            write_checkpoint(p, hi)?;
        }
        summary.completed_through = Some(hi);
    }
    Ok(summary)
}

/// True when a node error message indicates pruned historical state
/// rather than a transient fault.
fn is_archive_gap(msg: &str) -> bool {
    let m = msg.to_ascii_lowercase();
    m.contains("missing trie node")
        || m.contains("state not available")
        || m.contains("pruned")
        || m.contains("archive node")
        || m.contains("state is not available")
}

async fn storage_at(
    transport: &dyn RpcTransport,
    contract: &str,
    slot: &str,
    block: u64,
    opts: &FetchOptions,
) -> Result<String, FetchError> {
    let params = json!([contract, slot, format!("0x{block:x}")]);
    match call_with_retry(transport, "eth_getStorageAt", params, opts).await {
        Ok(v) => {
            let s = v.as_str().ok_or_else(|| {
                FetchError::Decode(format!("eth_getStorageAt returned non-string {v}"))
            })?;
            word_to_decimal(s, "storage word")
        }
        Err(FetchError::Rpc { msg, .. }) if is_archive_gap(&msg) => {
            Err(FetchError::ArchiveRequired { block, msg })
        }
        Err(e) => Err(e),
    }
}

/// Samples the five pool-state variables every `stride` blocks across
/// `[from_block, to_block]` (inclusive endpoints on the stride grid).
/// Requires archive-grade history; a pruned-state node error maps to a
/// dedicated diagnostic naming the first failing block.
pub async fn fetch_state(
    transport: Arc<dyn RpcTransport>,
    contract: &str,
    from_block: u64,
    to_block: u64,
    stride: u64,
    opts: &FetchOptions,
    sink: &mut (dyn FnMut(StateCsvRow) -> Result<(), FetchError> + Send),
) -> Result<FetchSummary, FetchError> {
    if from_block > to_block {
        return Err(FetchError::Decode(format!(
            "empty range: from {from_block} > to {to_block}"
        )));
    }
    let stride = stride.max(1);
    let resume_after = match &opts.checkpoint {
        Some(p) => read_checkpoint(p)?,
        None => None,
    };
    let samples: Vec<u64> = (from_block..=to_block)
        .step_by(stride as usize)
        .filter(|b| resume_after.is_none_or(|done| *b > done))
        .collect();

    let mut summary = FetchSummary {
        rows: 0,
        completed_through: resume_after,
    };
    let mut inflight: std::collections::VecDeque<(u64, tokio::task::JoinHandle<Result<StateCsvRow, FetchError>>)> =
        std::collections::VecDeque::new();
    let mut next = 0usize;
    let concurrency = opts.concurrency.max(1);

    loop {
        while inflight.len() < concurrency && next < samples.len() {
            let block = samples[next];
            next += 1;
            let transport = Arc::clone(&transport);
            let contract = contract.to_string();
            let opts = opts.clone();
            inflight.push_back((
                block,
                tokio::spawn(async move {
                    let mut values = Vec::with_capacity(5);
                    for (_, slot) in state_slots() {
                        values
                            .push(storage_at(transport.as_ref(), &contract, slot, block, &opts).await?);
                    }
                    let mut it = values.into_iter();
                    Ok(StateCsvRow {
                        block_number: block,
                        deposited_validators: it.next().expect("five slots"),
                        beacon_validators: it.next().expect("five slots"),
                        beacon_balance: it.next().expect("five slots"),
                        buffered_ether: it.next().expect("five slots"),
                        total_shares: it.next().expect("five slots"),
                    })
                }),
            ));
        }
        let Some((block, handle)) = inflight.pop_front() else {
            break;
        };
        let row = handle.await.map_err(|e| FetchError::Rpc {
            attempts: 1,
            msg: format!("worker failed: {e}"),
        })??;
        summary.rows += 1;
        sink(row)?;
        if let Some(p) = &opts.checkpoint {
            write_checkpoint(p, block)?;
        }
        summary.completed_through = Some(block);
    }
    Ok(summary)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::io::registry::{SLOT_BUFFERED_ETHER, SLOT_TOTAL_SHARES, TRANSFER_TOPIC};
    use std::sync::atomic::{AtomicI64, Ordering};
    use std::sync::Mutex;

    /// Canned node: serves a fixed log set and storage map, with optional
    /// transient-failure injection and a call budget to simulate a crash.
    #[derive(Default)]
    struct FixtureTransport {
        logs: Vec<Value>,
        storage: std::collections::BTreeMap<(String, u64), String>,
        /// blocks below this height answer storage reads like a pruned node
        archive_floor: Option<u64>,
        /// next N calls fail with a transient error
        fail_next: AtomicI64,
        /// total successful calls allowed (negative = unlimited)
        budget: AtomicI64,
        calls: Mutex<Vec<String>>,
    }

    impl FixtureTransport {
        fn new() -> Self {
            FixtureTransport {
                budget: AtomicI64::new(-1),
                ..Default::default()
            }
        }
    }

    #[async_trait]
    impl RpcTransport for FixtureTransport {
        async fn call(&self, method: &str, params: Value) -> Result<Value, FetchError> {
            self.calls.lock().unwrap().push(method.to_string());
            if self.fail_next.fetch_sub(1, Ordering::SeqCst) > 0 {
                return Err(FetchError::Rpc {
                    attempts: 1,
                    msg: "injected transient failure".to_string(),
                });
            }
            let b = self.budget.load(Ordering::SeqCst);
            if b >= 0 {
                if b == 0 {
                    return Err(FetchError::Rpc {
                        attempts: 1,
                        msg: "connection reset (budget exhausted)".to_string(),
                    });
                }
                self.budget.fetch_sub(1, Ordering::SeqCst);
            }
            match method {
                "eth_getLogs" => {
                    let filter = &params[0];
                    let lo = hex_quantity(&filter["fromBlock"], "fromBlock")?;
                    let hi = hex_quantity(&filter["toBlock"], "toBlock")?;
                    let hits: Vec<Value> = self
                        .logs
                        .iter()
                        .filter(|l| {
                            let b = hex_quantity(&l["blockNumber"], "blockNumber").unwrap();
                            b >= lo && b <= hi
                        })
                        .cloned()
                        .collect();
                    Ok(Value::Array(hits))
                }
                "eth_getStorageAt" => {
                    let slot = params[1].as_str().unwrap().to_string();
                    let block = hex_quantity(&params[2], "block tag")?;
                    if self.archive_floor.is_some_and(|floor| block < floor) {
                        return Err(FetchError::Rpc {
                            attempts: 1,
                            msg: format!("missing trie node for block {block}"),
                        });
                    }
                    Ok(Value::String(
                        self.storage
                            .get(&(slot, block))
                            .cloned()
                            .unwrap_or_else(|| format!("0x{:064x}", 0)),
                    ))
                }
                other => Err(FetchError::Decode(format!("unexpected method {other}"))),
            }
        }
    }

    fn fixture_log(block: u64, log_index: u64, from: u8, to: u8, value: u64) -> Value {
        json!({
            "blockNumber": format!("0x{block:x}"),
            "logIndex": format!("0x{log_index:x}"),
            "transactionHash": format!("0x{:064x}", block * 1000 + log_index),
            "topics": [
                TRANSFER_TOPIC,
                format!("0x{:064x}", from),
                format!("0x{:064x}", to),
            ],
            "data": format!("0x{value:064x}"),
        })
    }

    fn five_log_fixture() -> Vec<Value> {
        vec![
            fixture_log(10, 0, 1, 2, 100),
            fixture_log(10, 1, 2, 3, 50),
            fixture_log(11, 0, 1, 3, 7),
            fixture_log(13, 2, 3, 1, 9),
            fixture_log(14, 0, 2, 1, 31),
        ]
    }

    async fn run_fetch(
        transport: Arc<dyn RpcTransport>,
        from: u64,
        to: u64,
        opts: &FetchOptions,
    ) -> (Result<FetchSummary, FetchError>, Vec<TransferCsvRow>) {
        let mut rows = Vec::new();
        let res = fetch_logs(
            transport,
            "0xae7ab96520de3a18e5e111b5eaab095312d7fe84",
            TRANSFER_TOPIC,
            from,
            to,
            opts,
            &mut |row| {
                rows.push(row);
                Ok(())
            },
        )
        .await;
        (res, rows)
    }

    #[tokio::test]
    async fn empty_range_advances_checkpoint() {
        let dir = tempfile::tempdir().unwrap();
        let ckpt = dir.path().join("ckpt");
        let t = Arc::new(FixtureTransport::new());
        let opts = FetchOptions {
            checkpoint: Some(ckpt.clone()),
            ..FetchOptions::default()
        };
        let (res, rows) = run_fetch(t, 100, 150, &opts).await;
        let summary = res.unwrap();
        assert!(rows.is_empty());
        assert_eq!(summary.rows, 0);
        assert_eq!(summary.completed_through, Some(150));
        assert_eq!(std::fs::read_to_string(&ckpt).unwrap().trim(), "150");
    }

    #[tokio::test]
    async fn five_canned_logs_decode() {
        let mut t = FixtureTransport::new();
        t.logs = five_log_fixture();
        let (res, rows) = run_fetch(Arc::new(t), 10, 20, &FetchOptions::default()).await;
        res.unwrap();
        assert_eq!(rows.len(), 5);
        assert_eq!(rows[0].block_number, 10);
        assert_eq!(rows[0].log_index, 0);
        assert_eq!(
            rows[0].from_address,
            "0x0000000000000000000000000000000000000001"
        );
        assert_eq!(
            rows[0].to_address,
            "0x0000000000000000000000000000000000000002"
        );
        assert_eq!(rows[0].value, "100");
        assert_eq!(rows[4].block_number, 14);
        assert_eq!(rows[4].value, "31");
    }

    #[tokio::test]
    async fn page_size_is_transparent() {
        let mk = || {
            let mut t = FixtureTransport::new();
            t.logs = five_log_fixture();
            Arc::new(t)
        };
        let small = FetchOptions {
            page_size: 2,
            ..FetchOptions::default()
        };
        let large = FetchOptions {
            page_size: 100,
            ..FetchOptions::default()
        };
        let (_, rows_small) = run_fetch(mk(), 10, 20, &small).await;
        let (_, rows_large) = run_fetch(mk(), 10, 20, &large).await;
        assert_eq!(rows_small, rows_large);
        assert_eq!(rows_small.len(), 5);
    }

    #[tokio::test]
    async fn transient_failures_are_retried() {
        let mut t = FixtureTransport::new();
        t.logs = five_log_fixture();
        t.fail_next = AtomicI64::new(2);
        let opts = FetchOptions {
            max_attempts: 4,
            backoff_ms: 1,
            ..FetchOptions::default()
        };
        let (res, rows) = run_fetch(Arc::new(t), 10, 20, &opts).await;
        res.unwrap();
        assert_eq!(rows.len(), 5);
    }

    #[tokio::test]
    async fn exhausted_retries_report_attempts() {
        let mut t = FixtureTransport::new();
        t.fail_next = AtomicI64::new(100);
        let opts = FetchOptions {
            max_attempts: 3,
            backoff_ms: 1,
            concurrency: 1,
            ..FetchOptions::default()
        };
        let (res, _) = run_fetch(Arc::new(t), 10, 20, &opts).await;
        match res {
            Err(FetchError::Rpc { attempts, .. }) => assert_eq!(attempts, 3),
            other => panic!("expected rpc failure, got {other:?}"),
        }
    }

    #[tokio::test]
    async fn killed_run_resumes_without_loss_or_duplication() {
        let dir = tempfile::tempdir().unwrap();
        let ckpt = dir.path().join("ckpt");
        let opts = FetchOptions {
            page_size: 2,
            concurrency: 1,
            max_attempts: 1,
            backoff_ms: 1,
            checkpoint: Some(ckpt.clone()),
            ..FetchOptions::default()
        };

        // uninterrupted reference run (no checkpoint)
        let mut t = FixtureTransport::new();
        t.logs = five_log_fixture();
        let reference_opts = FetchOptions {
            checkpoint: None,
            ..opts.clone()
        };
        let (_, reference) = run_fetch(Arc::new(t), 10, 15, &reference_opts).await;
        assert_eq!(reference.len(), 5);

        // crash after two successful pages
        let mut t = FixtureTransport::new();
        t.logs = five_log_fixture();
        t.budget = AtomicI64::new(2);
        let (res, first_half) = run_fetch(Arc::new(t), 10, 15, &opts).await;
        assert!(res.is_err());
        assert_eq!(std::fs::read_to_string(&ckpt).unwrap().trim(), "13");

        // resume with a healthy node
        let mut t = FixtureTransport::new();
        t.logs = five_log_fixture();
        let (res, second_half) = run_fetch(Arc::new(t), 10, 15, &opts).await;
        res.unwrap();

        let mut combined = first_half;
        combined.extend(second_half);
        assert_eq!(combined, reference);
    }

    #[tokio::test]
    async fn state_single_block_echoes_fixture() {
        let mut t = FixtureTransport::new();
        t.storage.insert(
            (SLOT_BUFFERED_ETHER.to_string(), 50),
            format!("0x{:064x}", 5_000_000_000_000_000_000_u64),
        );
        t.storage
            .insert((SLOT_TOTAL_SHARES.to_string(), 50), format!("0x{:064x}", 123));
        let mut rows = Vec::new();
        let summary = fetch_state(
            Arc::new(t),
            "0xae7ab96520de3a18e5e111b5eaab095312d7fe84",
            50,
            50,
            1,
            &FetchOptions::default(),
            &mut |row| {
                rows.push(row);
                Ok(())
            },
        )
        .await
        .unwrap();
        assert_eq!(summary.rows, 1);
        assert_eq!(rows.len(), 1);
        assert_eq!(rows[0].block_number, 50);
        assert_eq!(rows[0].buffered_ether, "5000000000000000000");
        assert_eq!(rows[0].total_shares, "123");
        assert_eq!(rows[0].deposited_validators, "0");
    }

    #[tokio::test]
    async fn state_stride_grid_is_inclusive() {
        let t = Arc::new(FixtureTransport::new());
        let mut rows = Vec::new();
        fetch_state(
            t,
            "0xae7ab96520de3a18e5e111b5eaab095312d7fe84",
            0,
            100,
            10,
            &FetchOptions::default(),
            &mut |row| {
                rows.push(row);
                Ok(())
            },
        )
        .await
        .unwrap();
        assert_eq!(rows.len(), 11);
        assert_eq!(rows.first().unwrap().block_number, 0);
        assert_eq!(rows.last().unwrap().block_number, 100);
    }

    #[tokio::test]
    async fn pruned_state_maps_to_archive_diagnostic() {
        let mut t = FixtureTransport::new();
        t.archive_floor = Some(1000);
        let mut rows = Vec::new();
        let res = fetch_state(
            Arc::new(t),
            "0xae7ab96520de3a18e5e111b5eaab095312d7fe84",
            500,
            600,
            100,
            &FetchOptions {
                concurrency: 1,
                ..FetchOptions::default()
            },
            &mut |row| {
                rows.push(row);
                Ok(())
            },
        )
        .await;
        match res {
            Err(FetchError::ArchiveRequired { block, .. }) => assert_eq!(block, 500),
            other => panic!("expected archive diagnostic, got {other:?}"),
        }
    }

    #[test]
    fn word_decoding() {
        assert_eq!(
            word_to_address(&format!("0x{:064x}", 0xabcdefu64), "t").unwrap(),
            "0x0000000000000000000000000000000000abcdef"
        );
        assert_eq!(word_to_decimal("0x", "t").unwrap(), "0");
        assert_eq!(word_to_decimal("0xff", "t").unwrap(), "255");
        assert_eq!(
            word_to_decimal(&format!("0x{}", "f".repeat(64)), "t").unwrap(),
            "115792089237316195423570985008687907853269984665640564039457584007913129639935"
        );
        assert!(word_to_decimal(&format!("0x{}", "f".repeat(65)), "t").is_err());
        assert!(word_to_decimal("0xzz", "t").is_err());
        assert!(hex_quantity(&json!("0x1f"), "t").unwrap() == 31);
        assert!(hex_quantity(&json!(5), "t").is_err());
    }

    #[test]
    fn page_planning() {
        let pages = plan_pages(0, 9, 4, None);
        let bounds: Vec<(u64, u64)> = pages.iter().map(|p| (p.lo, p.hi)).collect();
        assert_eq!(bounds, vec![(0, 3), (4, 7), (8, 9)]);
        // resume skips completed work
        let pages = plan_pages(0, 9, 4, Some(3));
        assert_eq!(pages[0].lo, 4);
        assert!(plan_pages(0, 9, 4, Some(9)).is_empty());
        assert!(plan_pages(0, 9, 4, Some(100)).is_empty());
    }
}
