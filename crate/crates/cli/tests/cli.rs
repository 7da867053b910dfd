//! End-to-end tests of the `curveops` binary: exit codes, golden reports,
//! determinism and the export subcommands.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn golden(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name)
}

fn curveops(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_curveops"))
        .args(args)
        .env("CURVEOPS_THREADS", "2")
        .output()
        .expect("binary runs")
}

fn run_to(scenario: &str, dir: &Path) -> (Output, Vec<u8>, Vec<u8>) {
    let json = dir.join("report.json");
    let csv = dir.join("report.csv");
    let out = curveops(&[
        "run",
        golden(scenario).to_str().unwrap(),
        "--json",
        json.to_str().unwrap(),
        "--csv",
        csv.to_str().unwrap(),
    ]);
    let j = std::fs::read(&json).unwrap_or_default();
    let c = std::fs::read(&csv).unwrap_or_default();
    (out, j, c)
}

fn assert_golden(scenario: &str) {
    let dir = tempfile::tempdir().unwrap();
    let (out, json, csv) = run_to(&format!("{scenario}.json"), dir.path());
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(
        String::from_utf8(json).unwrap(),
        std::fs::read_to_string(golden(&format!("{scenario}.report.json"))).unwrap(),
        "JSON report of {scenario} drifted from the golden file"
    );
    assert_eq!(
        String::from_utf8(csv).unwrap(),
        std::fs::read_to_string(golden(&format!("{scenario}.report.csv"))).unwrap(),
        "CSV report of {scenario} drifted from the golden file"
    );
}

#[test]
fn golden_sphere4_eigenvalues() {
    assert_golden("sphere4_v1");
}

#[test]
fn golden_torus_principal_symbol() {
    assert_golden("torus_v6");
}

#[test]
fn golden_torus_properties() {
    assert_golden("torus_properties");
}

#[test]
fn failing_check_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let (out, json, _) = run_to("torus_tight.json", dir.path());
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stdout).contains("V2 FAIL"));
    assert!(String::from_utf8(json).unwrap().contains("\"FAIL\""));
}

#[test]
fn malformed_scenario_exits_two_with_location() {
    let out = curveops(&["run", golden("malformed.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 4"), "{err}");
}

#[test]
fn missing_scenario_exits_two() {
    let out = curveops(&["run", "/nonexistent/scenario.json"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn reports_are_deterministic_across_runs_and_thread_counts() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let (_, j1, c1) = run_to("torus_properties.json", a.path());
    let json = b.path().join("r.json");
    let out = Command::new(env!("CARGO_BIN_EXE_curveops"))
        .args(["run", golden("torus_properties.json").to_str().unwrap()])
        .args(["--json", json.to_str().unwrap()])
        .env("CURVEOPS_THREADS", "1")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(j1, std::fs::read(&json).unwrap());
    assert!(!c1.is_empty());
}

#[test]
fn seed_flag_changes_randomized_suites_only() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("r.json");
    let out = curveops(&[
        "run",
        golden("torus_properties.json").to_str().unwrap(),
        "--seed",
        "99",
        "--json",
        json.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&json).unwrap();
    assert!(text.contains("\"seed\": 99"));
    assert_ne!(text, std::fs::read_to_string(golden("torus_properties.report.json")).unwrap());
}

#[test]
fn operator_export_writes_manifest_and_entries() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("op.json");
    let out = curveops(&[
        "operator", "--surface", "torus", "--curve", "D_e", "--level", "12", "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["manifest"]["r"], 12);
    assert_eq!(v["manifest"]["dimension"], 9);
    assert!(!v["entries"].as_array().unwrap().is_empty());
}

#[test]
fn operator_rejects_infeasible_level_and_unknown_curve() {
    let bad_level = curveops(&["operator", "--surface", "torus", "--curve", "D_e", "--level", "40"]);
    assert_eq!(bad_level.status.code(), Some(2));
    let bad_curve = curveops(&["operator", "--surface", "torus", "--curve", "X_e", "--level", "12"]);
    assert_eq!(bad_curve.status.code(), Some(2));
}

#[test]
fn symbol_reports_principal_coefficients() {
    let out = curveops(&[
        "symbol", "--surface", "torus", "--curve", "C_e", "--tau", "0.3", "--levels",
        "100,140,220,340,460,700",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let f0 = v["per-k"][0]["F0"][0].as_f64().unwrap();
    // σ₀(C_e) = −2cos(πτ).
    assert!((f0 + 2.0 * (std::f64::consts::PI * 0.3).cos()).abs() < 1e-9, "{f0}");
}

#[test]
fn charvar_evaluates_trace_functions() {
    let out = curveops(&[
        "charvar", "--surface", "torus", "--tau", "0.3", "--theta", "-0.4", "--curve", "C_e",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let f = v["trace_function"].as_f64().unwrap();
    assert!((f + 2.0 * (std::f64::consts::PI * 0.3).cos()).abs() < 1e-12, "{f}");
    assert!(v["relation_residual"].as_f64().unwrap() < 1e-10);
}

#[test]
fn charvar_rejects_wrong_dimension() {
    let out = curveops(&["charvar", "--surface", "genus2", "--tau", "0.3", "--theta", "0.1"]);
    assert_eq!(out.status.code(), Some(2));
}
