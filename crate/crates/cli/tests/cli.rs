//! Black-box tests of the `microvel` binary: spawn the real executable,
//! check exit codes and parse its stdout as JSON.

use microvel_core::io::csv::write_transfers;
use microvel_core::{AccountId, BlockHeight, Denomination, TokenAmount, TransferRecord, ZERO_ADDRESS};
use std::path::Path;
use std::process::{Command, Output};

fn microvel(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_microvel"))
        .args(args)
        // Force the embedded-server path no matter how the host is set up.
        .env_remove("MICROVEL_SERVER")
        .env_remove("RUST_LOG")
        .output()
        .expect("spawn microvel")
}

fn stdout_json(out: &Output) -> serde_json::Value {
    assert!(
        out.status.success(),
        "exit {:?}; stderr: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn record(block: u64, log_index: u64, from: AccountId, to: AccountId, value: u64) -> TransferRecord {
    TransferRecord {
        block: BlockHeight(block),
        log_index,
        from,
        to,
        value: TokenAmount::from_u64(value),
        denomination: Denomination::Shares,
    }
}

/// Two mints and one spend; aggregate velocity at block 20 is 0.275.
fn write_fixture(path: &Path) {
    let a = AccountId::synthetic(0);
    let b = AccountId::synthetic(1);
    let records = vec![
        record(10, 0, ZERO_ADDRESS, a, 8),
        record(16, 0, ZERO_ADDRESS, b, 8),
        record(18, 0, a, b, 4),
    ];
    write_transfers(path, &records).expect("write fixture");
}

#[test]
fn help_exits_zero() {
    let out = microvel(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("velocity"), "help lists subcommands: {text}");
}

#[test]
fn unknown_flag_exits_one() {
    let out = microvel(&["velocity", "--no-such-flag"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn partial_range_exits_one() {
    let out = microvel(&["velocity", "--input", "x.csv", "--from", "5"]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("--from, --to and --every"), "got: {err}");
}

#[test]
fn missing_input_exits_two() {
    let out = microvel(&["velocity", "--input", "/definitely/not/here.csv"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!String::from_utf8_lossy(&out.stderr).is_empty());
}

#[test]
fn velocity_reads_a_csv_and_prints_samples() {
    let dir = tempfile::tempdir().expect("tempdir");
    let ledger = dir.path().join("ledger.csv");
    write_fixture(&ledger);

    let out = microvel(&[
        "velocity",
        "--input",
        ledger.to_str().unwrap(),
        "--kind",
        "steth-shares",
        "--blocks",
        "20",
        "--scope",
        "global",
    ]);
    let body = stdout_json(&out);
    assert_eq!(body["sample_count"], 1);
    let sample = &body["samples"][0];
    assert_eq!(sample["block"], 20);
    assert_eq!(sample["scope"], "global");
    assert_eq!(sample["money"], "16");
    let velocity = sample["velocity"].as_f64().expect("velocity number");
    assert!((velocity - 0.275).abs() < 1e-12, "got {velocity}");
}

#[test]
fn velocity_out_writes_csv_and_omits_body_samples() {
    let dir = tempfile::tempdir().expect("tempdir");
    let ledger = dir.path().join("ledger.csv");
    let samples = dir.path().join("samples.csv");
    write_fixture(&ledger);

    let out = microvel(&[
        "velocity",
        "--input",
        ledger.to_str().unwrap(),
        "--kind",
        "steth-shares",
        "--blocks",
        "20",
        "--out",
        samples.to_str().unwrap(),
    ]);
    let body = stdout_json(&out);
    assert!(body["samples"].is_null(), "samples diverted to file");
    let written = std::fs::read_to_string(&samples).expect("samples file");
    assert!(written.lines().count() > 1, "header plus rows: {written}");
}

#[test]
fn convert_reports_exact_quotient() {
    let out = microvel(&[
        "convert",
        "--direction",
        "tokens-to-shares",
        "--amount",
        "100",
        "--buffered-ether",
        "1000",
        "--total-shares",
        "500",
    ]);
    let body = stdout_json(&out);
    assert_eq!(body["value"], "50");
    assert_eq!(body["rate"], "0.5");
}

#[test]
fn generate_is_reproducible_across_runs() {
    let dir = tempfile::tempdir().expect("tempdir");
    let first = dir.path().join("a.csv");
    let second = dir.path().join("b.csv");
    for path in [&first, &second] {
        let out = microvel(&[
            "generate",
            "--seed",
            "41",
            "--accounts",
            "10",
            "--transfers",
            "200",
            "--out",
            path.to_str().unwrap(),
        ]);
        let body = stdout_json(&out);
        assert_eq!(body["records"], 200);
    }
    let a = std::fs::read(&first).expect("first run");
    let b = std::fs::read(&second).expect("second run");
    assert_eq!(a, b, "same seed, same bytes");
}

#[test]
fn fetch_without_rpc_url_exits_one() {
    let out = Command::new(env!("CARGO_BIN_EXE_microvel"))
        .args(["fetch-logs", "--from", "0", "--to", "10", "--out", "x.csv"])
        .env_remove("MICROVEL_SERVER")
        .env_remove("MICROVEL_RPC_URL")
        .output()
        .expect("spawn microvel");
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("MICROVEL_RPC_URL"), "got: {err}");
}
