use std::process::{Command, Output};

use fock_receiver::analysis::read_csv;

fn rxsim(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rxsim"))
        .args(args)
        .output()
        .expect("rxsim runs")
}

#[test]
fn validate_passes() {
    let out = rxsim(&["validate"]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("report hash"));
    assert!(!text.contains("FAIL"));
}

#[test]
fn exact_zero_sweep_then_fit() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("zero.csv");
    let out = rxsim(&[
        "sweep",
        "--pair",
        "zero-one",
        "--n",
        "2,4,8",
        "--mode",
        "exact",
        "--out",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let rows = read_csv(std::fs::File::open(&csv).unwrap()).unwrap();
    assert_eq!(rows.iter().map(|r| r.n).collect::<Vec<_>>(), vec![2, 4, 8]);
    assert!(rows.iter().all(|r| r.p_err < 1e-10));

    let out = rxsim(&["fit", csv.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("ExactZero"));
}

#[test]
fn config_file_supplies_defaults() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.json");
    std::fs::write(&cfg, r#"{"n_values": [2, 4, 8], "mode": "exact"}"#).unwrap();
    let out = rxsim(&[
        "--config",
        cfg.to_str().unwrap(),
        "sweep",
        "--pair",
        "cat",
        "--format",
        "json",
    ]);
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let rows = report["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 3);
    assert!(rows.iter().all(|r| r["mode"] == "exact"));
    // three points spanning a factor of 4 sit well inside the generic window
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
}

#[test]
fn oracle_prints_the_decision() {
    let out = rxsim(&[
        "oracle",
        "--pair",
        "plus-minus",
        "--n",
        "9",
        "--record",
        "0,0,0,0,0,0,0,0,1",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("rotated design"));
    assert!(text.contains("decision:"));
}

#[test]
fn bad_input_exits_with_one() {
    assert_eq!(
        rxsim(&["sweep", "--pair", "no-such-pair", "--n", "2,4,8"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        rxsim(&["oracle", "--pair", "cat", "--n", "2", "--record", "0,0,0"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(rxsim(&["sweep", "--n", "8,4,16"]).status.code(), Some(1));
}

#[test]
fn rotation_too_large_for_small_n_is_rejected() {
    // N^-1/3 >= 1/2 for every N <= 8
    assert_eq!(
        rxsim(&["oracle", "--pair", "plus-minus", "--n", "3"])
            .status
            .code(),
        Some(1)
    );
}
