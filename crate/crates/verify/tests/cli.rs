use std::process::Command;

use griesz::{RatioReport, SuiteReport};

fn griesz() -> Command {
    Command::new(env!("CARGO_BIN_EXE_griesz"))
}

#[test]
fn invalid_preset_is_a_config_error_without_output() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.json");
    let status = griesz()
        .args(["theorem", "--exponent", "wiggly:2", "--out"])
        .arg(&out)
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(2));
    assert!(!out.exists());
}

#[test]
fn bad_flags_and_documents_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.json");
    std::fs::write(&cfg, r#"{"dim": 7}"#).unwrap();
    let out = dir.path().join("r.json");
    let runs: Vec<Vec<String>> = vec![
        vec!["--config".into(), cfg.display().to_string(), "suite".into()],
        vec!["suite".into(), "--suite".into(), "everything".into()],
        vec!["suite".into(), "--budget".into(), "max_panels".into()],
        vec!["suite".into(), "--budget".into(), "grid=3".into()],
        vec!["theorem".into(), "--beta".into(), "0.5".into()],
        vec!["kernel-probe".into(), "--x".into(), "1".into(), "--y".into(), "1,2".into()],
    ];
    for args in runs {
        let status = griesz().args(&args).arg("--out").arg(&out).status().unwrap();
        assert_eq!(status.code(), Some(2), "{args:?}");
        assert!(!out.exists(), "{args:?}");
    }
}

#[test]
fn passing_suite_exits_zero_and_writes_json() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("hermite.json");
    let status = griesz()
        .args(["suite", "--suite", "hermite", "--suite", "varlp", "--dim", "2", "--pairs", "50", "--out"])
        .arg(&out)
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(0));
    let r: SuiteReport = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert!(r.passed);
    assert_eq!(r.config.dim, 2);
    assert!(r.checks.iter().any(|c| c.name == "orthogonality"));
}

#[test]
fn failing_invariant_exits_one() {
    let status = griesz()
        .args(["suite", "--suite", "varlp", "--tolerance", "norm=0.5", "--pairs", "20"])
        .output()
        .unwrap();
    assert_eq!(status.status.code(), Some(1));
}

#[test]
fn theorem_csv_has_one_row_per_function() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("t.csv");
    let status = griesz()
        .env("GRIESZ_THREADS", "2")
        .args(["theorem", "--samples", "9", "--beta", "1", "--exponent", "constant:2", "--format", "csv", "--out"])
        .arg(&out)
        .status()
        .unwrap();
    let text = std::fs::read_to_string(&out).unwrap();
    let passed = text.contains("# passed: true");
    assert_eq!(status.code(), Some(if passed { 0 } else { 1 }));
    let records: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(records.len(), 10);
    assert!(records[0].starts_with("id,family"));
    assert!(text.contains("# contraction: true"));
}

#[test]
fn theorem_json_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("t.json");
    let status = griesz()
        .args(["theorem", "--samples", "6", "--dim", "1", "--out"])
        .arg(&out)
        .status()
        .unwrap();
    let text = std::fs::read_to_string(&out).unwrap();
    let r: RatioReport = serde_json::from_str(&text).unwrap();
    assert_eq!(status.code(), Some(if r.summary.passed { 0 } else { 1 }));
    assert_eq!(r.rows.len(), 6);
    assert_eq!(griesz::report::render_json(&r).unwrap(), text);
}

#[test]
fn kernel_probe_prints_json() {
    let out = griesz()
        .args(["kernel-probe", "--x", "1", "--y", "2", "--beta", "2"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["geometry"]["a"], 5.0);
    assert_eq!(v["geometry"]["t0"], 0.75);
    assert!(v["terms"].as_f64().unwrap() > 0.0);
}

#[test]
fn bad_thread_count_is_a_config_error() {
    let status = griesz()
        .env("GRIESZ_THREADS", "zero")
        .args(["suite", "--suite", "hermite"])
        .output()
        .unwrap();
    assert_eq!(status.status.code(), Some(2));
}
