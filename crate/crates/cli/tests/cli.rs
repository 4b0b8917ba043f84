//! End-to-end binary tests: exit codes, report schema, and round-trips of
//! emitted artifacts through the verifying subcommands.

use serde_json::Value;
use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_sidongap"))
}

fn run(args: &[&str]) -> (Output, Value) {
    let out = bin().args(args).output().expect("spawn sidongap");
    let report: Value = serde_json::from_slice(&out.stdout)
        .unwrap_or_else(|e| panic!("stdout is not a report ({e}): {args:?}"));
    assert_eq!(report["schema_version"], 1);
    assert_eq!(report["exit_code"], out.status.code().unwrap());
    (out, report)
}

fn tmp(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("sidongap-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn elementary_example() {
    let (out, report) = run(&["construct", "elementary", "--n", "100"]);
    assert!(out.status.success());
    assert_eq!(report["verdict"], "constructed");
    assert_eq!(report["payload"]["size"], 10);
    assert_eq!(report["payload"]["gap"]["measure"], 10);
}

#[test]
fn verify_conflict_exits_one_with_witness() {
    let path = tmp("conflict.json");
    std::fs::write(&path, r#"{"n":6,"elements":[1,2,3,6]}"#).unwrap();
    let (out, report) = run(&["sidon", "verify", "--input", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(report["verdict"], "conflict");
    let w = &report["payload"]["witness"];
    assert_eq!(
        (w["a"].as_u64(), w["b"].as_u64(), w["c"].as_u64(), w["d"].as_u64()),
        (Some(1), Some(6), Some(2), Some(3))
    );
}

#[test]
fn domain_errors_exit_two() {
    let (out, report) = run(&["exact", "g", "--n", "0"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(report["verdict"], "error");

    let out = bin().args(["frobnicate"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2)); // clap usage error

    let (out, _) = run(&[
        "--sieve-cap",
        "100",
        "primes",
        "scan-bhp",
        "--from",
        "1000",
        "--to",
        "2000",
    ]);
    assert_eq!(out.status.code(), Some(2)); // capacity ceiling
}

#[test]
fn bhp_scan_verdicts() {
    let (out, report) = run(&["primes", "scan-bhp", "--from", "127", "--to", "2000"]);
    assert!(out.status.success());
    assert_eq!(report["verdict"], "holds");

    let (out, report) = run(&["primes", "scan-bhp", "--from", "100", "--to", "2000"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(report["payload"]["first_failure"], 126);
}

#[test]
fn lm_sum_with_csv() {
    let csv = tmp("lm.csv");
    let (out, report) = run(&[
        "primes", "lm-sum", "--x", "100", "--alpha", "0.47", "--beta", "0.3",
        "--csv", csv.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert_eq!(report["verdict"], "distinct");
    assert_eq!(report["payload"]["total_count"], 4);
    let body = std::fs::read_to_string(&csv).unwrap();
    assert_eq!(body, "m,count\n1,3\n2,1\n3,0\n");
    assert_eq!(report["artifacts"][0], csv.to_str().unwrap());
}

#[test]
fn construct_matching_round_trip() {
    let set = tmp("set.json");
    let cert = tmp("cert.json");
    let (out, report) = run(&[
        "construct", "matching", "--n", "10000",
        "--alpha", "0.47", "--beta", "0.45",
        "--set-out", set.to_str().unwrap(),
        "--cert-out", cert.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "matching failed: {report}");
    assert_eq!(report["verdict"], "constructed");
    assert_eq!(report["params"]["H"], 152);

    let (out, _) = run(&["sidon", "verify", "--input", set.to_str().unwrap()]);
    assert!(out.status.success());
    let (out, report) = run(&["sidon", "check-cert", "--input", cert.to_str().unwrap()]);
    assert!(out.status.success());
    assert_eq!(report["verdict"], "certificate-valid");
}

#[test]
fn theorem1_check() {
    let (out, report) = run(&["construct", "check-theorem1", "--q", "50"]);
    assert!(out.status.success());
    assert_eq!(report["verdict"], "distinct");

    let (out, report) = run(&["construct", "check-theorem1", "--q", "0"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(report["verdict"], "collision");
}

#[test]
fn match_run_and_hall_check() {
    let good = tmp("good-graph.json");
    std::fs::write(
        &good,
        r#"{"left":[0,1],"right":[10,11],"edges":[
            {"u":0,"v":10,"w_num":1,"w_den":2,"ms":[1]},
            {"u":0,"v":11,"w_num":1,"w_den":2,"ms":[2]},
            {"u":1,"v":10,"w_num":1,"w_den":2,"ms":[1]},
            {"u":1,"v":11,"w_num":1,"w_den":2,"ms":[3]}]}"#,
    )
    .unwrap();
    let (out, report) = run(&["match", "run", "--graph", good.to_str().unwrap()]);
    assert!(out.status.success());
    assert_eq!(report["verdict"], "covering");
    assert_eq!(report["payload"]["size"], 2);

    let (out, report) =
        run(&["match", "hall-check", "--graph", good.to_str().unwrap(), "--L0", "1"]);
    assert!(out.status.success(), "{report}");
    assert_eq!(report["verdict"], "hall-ok");

    let (out, _) =
        run(&["match", "hall-check", "--graph", good.to_str().unwrap(), "--L0", "3/2"]);
    assert_eq!(out.status.code(), Some(1)); // rows now fall short

    let bad = tmp("bad-graph.json");
    std::fs::write(
        &bad,
        r#"{"left":[0,1],"right":[10],"edges":[
            {"u":0,"v":10,"w_num":1,"w_den":1,"ms":[]},
            {"u":1,"v":10,"w_num":1,"w_den":1,"ms":[]}]}"#,
    )
    .unwrap();
    let (out, report) = run(&["match", "run", "--graph", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(report["verdict"], "deficient");
    let w = &report["payload"]["witness"];
    assert_eq!(w["left_set"].as_array().unwrap().len(), 2);
    assert_eq!(w["neighborhood"].as_array().unwrap().len(), 1);
}

#[test]
fn exact_table_csv() {
    let csv = tmp("table.csv");
    let (out, report) = run(&[
        "--threads", "2",
        "exact", "table", "--to", "12", "--out", csv.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{report}");
    let body = std::fs::read_to_string(&csv).unwrap();
    let lines: Vec<&str> = body.lines().collect();
    assert_eq!(lines.len(), 13);
    assert_eq!(lines[0], "n,g,witness,max_size,excess_over_pi");
    assert!(lines[1].starts_with("1,0,1,1,"));
}

#[test]
fn report_deterministic_modulo_timings() {
    let strip = |mut v: Value| {
        v["timings_ms"] = Value::Null;
        v
    };
    let (_, a) = run(&["exact", "g", "--n", "15"]);
    let (_, b) = run(&["exact", "g", "--n", "15"]);
    assert_eq!(strip(a), strip(b));
}

#[test]
fn report_to_file_via_out() {
    let path = tmp("report.json");
    let out = bin()
        .args(["--out", path.to_str().unwrap(), "exact", "g", "--n", "10"])
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let report: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(report["verdict"], "exact");
    assert_eq!(report["payload"]["value"], 2);
}
