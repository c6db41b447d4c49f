//! End-to-end checks of the binary: exit codes, report/CSV artifacts,
//! config-file override order, and byte-level determinism.

use std::path::Path;
use std::process::{Command, Output};

fn run(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rhlens"))
        .arg("--out-dir")
        .arg(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn report(dir: &Path) -> serde_json::Value {
    let text = std::fs::read_to_string(dir.join("report.json")).expect("report.json exists");
    serde_json::from_str(&text).expect("report.json parses")
}

fn csv(dir: &Path) -> String {
    std::fs::read_to_string(dir.join("data.csv")).expect("data.csv exists")
}

#[test]
fn szego_check_passes_and_reports() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(dir.path(), &["szego-check", "--weight", "legendre", "--n", "100"]);
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("PASS"), "{stdout}");

    let rep = report(dir.path());
    assert_eq!(rep["command"], "szego-check");
    assert_eq!(rep["config"]["weight"], "legendre");
    assert_eq!(rep["config"]["n"], 100);
    assert_eq!(rep["config"]["tol"], 0.01);
    assert_eq!(rep["pass"], true);
    assert!(rep["metrics"]["rel_err"].as_f64().unwrap() <= 0.01);

    let data = csv(dir.path());
    assert!(data.starts_with("n,norm,limit,rel_err\n"));
    assert_eq!(data.lines().count(), 101);
}

#[test]
fn budget_example_matches_closed_form() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(dir.path(), &["budget", "--nu-plus", "10", "--nu-minus", "inf"]);
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("lambda = 3/10"), "{stdout}");
    assert!(stdout.contains("tau = 5/2"), "{stdout}");

    let rep = report(dir.path());
    assert_eq!(rep["metrics"]["lambda"], 0.3);
    assert_eq!(rep["metrics"]["tau"], 2.5);
    assert_eq!(rep["metrics"]["admissible"], true);
    assert_eq!(rep["pass"], true);
    assert!(csv(dir.path()).contains("tau,5/2\n"));
}

#[test]
fn inadmissible_budget_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(dir.path(), &["budget", "--nu-plus", "6", "--nu-minus", "6"]);
    assert_eq!(out.status.code(), Some(1), "{out:?}");
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("FAIL"), "{stdout}");
    let rep = report(dir.path());
    assert_eq!(rep["pass"], false);
    assert_eq!(rep["metrics"]["admissible"], false);
}

#[test]
fn config_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    // Unknown weight family.
    let out = run(dir.path(), &["szego-check", "--weight", "nosuch"]);
    assert_eq!(out.status.code(), Some(2), "{out:?}");
    // Malformed degree ladder.
    let out = run(dir.path(), &["asym-sweep", "--ns", "10,10,20"]);
    assert_eq!(out.status.code(), Some(2), "{out:?}");
    // Unparseable config file.
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{ not json").unwrap();
    let out = run(dir.path(), &["--config", bad.to_str().unwrap(), "szego-check"]);
    assert_eq!(out.status.code(), Some(2), "{out:?}");
    // Unknown field in the config file.
    std::fs::write(&bad, r#"{"weigth": "legendre"}"#).unwrap();
    let out = run(dir.path(), &["--config", bad.to_str().unwrap(), "szego-check"]);
    assert_eq!(out.status.code(), Some(2), "{out:?}");
    // Unknown flag is a usage error.
    let out = run(dir.path(), &["szego-check", "--frobnicate"]);
    assert_eq!(out.status.code(), Some(2), "{out:?}");
}

#[test]
fn config_file_defaults_yield_to_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    std::fs::write(&cfg, r#"{"weight": "chebyshev1", "n": 50, "tol": 0.02}"#).unwrap();
    let out = run(
        dir.path(),
        &["--config", cfg.to_str().unwrap(), "szego-check", "--n", "40"],
    );
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    let rep = report(dir.path());
    // Flag wins over file; file wins over the built-in default.
    assert_eq!(rep["config"]["n"], 40);
    assert_eq!(rep["config"]["weight"], "chebyshev1");
    assert_eq!(rep["config"]["tol"], 0.02);
}

#[test]
fn sweep_csv_is_byte_identical_across_runs() {
    let dir_a = tempfile::tempdir().unwrap();
    let dir_b = tempfile::tempdir().unwrap();
    let args = ["asym-sweep", "--weight", "legendre", "--ns", "5,8,12,20,35,50"];
    let out_a = run(dir_a.path(), &args);
    let out_b = run(dir_b.path(), &args);
    assert_eq!(out_a.status.code(), Some(0), "{out_a:?}");
    assert_eq!(out_b.status.code(), Some(0), "{out_b:?}");
    let bytes_a = std::fs::read(dir_a.path().join("data.csv")).unwrap();
    let bytes_b = std::fs::read(dir_b.path().join("data.csv")).unwrap();
    assert_eq!(bytes_a, bytes_b, "identical config must give identical CSV");
    assert!(!bytes_a.is_empty());
    // The report records the resolved configuration, identically.
    assert_eq!(report(dir_a.path()), report(dir_b.path()));
}

#[test]
fn sie_roundtrip_writes_resolution_ladder() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(dir.path(), &["sie-roundtrip", "--nodes", "128"]);
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    let data = csv(dir.path());
    let ms: Vec<&str> = data.lines().skip(1).map(|l| l.split(',').next().unwrap()).collect();
    assert_eq!(ms, ["32", "64", "128"]);
    let rep = report(dir.path());
    assert!(rep["metrics"]["residual_jump"].as_f64().unwrap() <= 1e-8);
}

#[test]
fn airy_check_is_deterministic() {
    let dir_a = tempfile::tempdir().unwrap();
    let dir_b = tempfile::tempdir().unwrap();
    let out_a = run(dir_a.path(), &["airy-check", "--seed", "7"]);
    let out_b = run(dir_b.path(), &["airy-check", "--seed", "7"]);
    assert_eq!(out_a.status.code(), Some(0));
    assert_eq!(out_b.status.code(), Some(0));
    assert_eq!(csv(dir_a.path()), csv(dir_b.path()));
}

#[test]
fn parametrix_check_deepens_recurrence_on_demand() {
    let dir = tempfile::tempdir().unwrap();
    // 64 samples push a node close to the cut, forcing a deeper recurrence
    // than the initial guess; the command must recover by itself.
    let out = run(
        dir.path(),
        &["parametrix-check", "--ns", "10,14,20", "--samples", "64"],
    );
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    let rep = report(dir.path());
    assert_eq!(rep["pass"], true);
    assert!(rep["metrics"]["det_defect"].as_f64().unwrap() <= 1e-6);
}
