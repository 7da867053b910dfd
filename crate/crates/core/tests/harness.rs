//! Scenario parsing, validation, report serialization and determinism.

use curveops::harness::{
    default_levels, emit_outputs, level_feasible, run_scenario, two_significant, write_report, Check, ReportFormat,
    Scenario, Status, Suite,
};
use curveops::surface::TestSurface;
use curveops::Error;

fn small_scenario() -> Scenario {
    Scenario::from_json(
        r#"{"name": "small", "surfaces": ["sphere4"], "suites": ["V1", "characters", "relations"],
            "levels": {"V1": [8, 12]}, "seed": 3}"#,
    )
    .unwrap()
}

fn bytes(s: &Scenario, format: ReportFormat) -> Vec<u8> {
    let mut buf = Vec::new();
    write_report(&run_scenario(s).unwrap(), format, &mut buf).unwrap();
    buf
}

#[test]
fn reports_are_byte_identical_across_runs() {
    let s = small_scenario();
    assert_eq!(bytes(&s, ReportFormat::Json), bytes(&s, ReportFormat::Json));
    assert_eq!(bytes(&s, ReportFormat::Csv), bytes(&s, ReportFormat::Csv));
}

#[test]
fn small_scenario_passes_with_one_line_per_suite() {
    let rep = run_scenario(&small_scenario()).unwrap();
    assert!(rep.passed());
    assert_eq!(rep.exit_code(), 0);
    assert_eq!(rep.summary().len(), 3);
    assert_eq!(rep.suite_status(Suite::V1), Some(Status::Pass));
    assert_eq!(rep.suite_status(Suite::V8), None);
    assert_eq!(rep.metadata.seed, 3);
}

#[test]
fn empty_suite_list_gives_header_only_csv() {
    let s = Scenario::from_json(r#"{"surfaces": ["torus"], "suites": []}"#).unwrap();
    let text = String::from_utf8(bytes(&s, ReportFormat::Csv)).unwrap();
    assert_eq!(text.lines().count(), 1);
    assert!(text.starts_with("suite,name,measured"));
}

#[test]
fn capability_errors_are_skipped_not_failed() {
    let skipped = Check::from_error(Suite::V6, "x".into(), &Error::Capability("beyond scope".into()));
    assert_eq!(skipped.status, Status::Skipped);
    let failed = Check::from_error(Suite::V6, "x".into(), &Error::Fit("singular".into()));
    assert_eq!(failed.status, Status::Fail);
}

#[test]
fn tightened_tolerance_fails() {
    let mut s = small_scenario();
    s.tolerances.eigenvalue = -1.0;
    let rep = run_scenario(&s).unwrap();
    assert_eq!(rep.suite_status(Suite::V1), Some(Status::Fail));
    assert_eq!(rep.exit_code(), 1);
}

#[test]
fn invalid_scenarios_are_usage_errors() {
    for text in [
        r#"{"surfaces": []}"#,
        r#"{"suites": ["V9"]}"#,
        r#"{"surfaces": ["torus"], "levels": {"V1": [10]}}"#,
        r#"{"surfaces": ["torus"], "curves": ["Q_e"]}"#,
        r#"{"surfaces": ["genus2"], "tau": [[0.3]]}"#,
        r#"{"surfaces": ["sphere4"], "tau": [[0.95]]}"#,
        r#"{"unknown_field": 1}"#,
    ] {
        assert!(matches!(Scenario::from_json(text), Err(Error::Usage(_))), "{text}");
    }
}

#[test]
fn scenario_hash_ignores_output_paths() {
    let a = small_scenario();
    let mut b = a.clone();
    b.output.json = Some("elsewhere.json".into());
    assert_eq!(a.hash(), b.hash());
    let mut c = a.clone();
    c.seed += 1;
    assert_ne!(a.hash(), c.hash());
}

#[test]
fn default_levels_are_feasible() {
    for surface in TestSurface::ALL {
        let g = surface.graph();
        for suite in Suite::ALL {
            if suite == Suite::V2 {
                continue;
            }
            for r in default_levels(surface, suite) {
                assert!(level_feasible(&g, r).is_ok(), "{suite} on {surface}: r={r}");
            }
        }
    }
}

#[test]
fn two_significant_digits() {
    assert_eq!(two_significant(0.9997), "1.0");
    assert_eq!(two_significant(0.0123), "0.012");
    assert_eq!(two_significant(5.4321), "5.4");
    assert_eq!(two_significant(0.0), "0");
}

#[test]
fn outputs_are_written_where_requested() {
    let dir = tempfile::tempdir().unwrap();
    let mut s = small_scenario();
    s.output.json = Some(dir.path().join("r.json"));
    s.output.csv = Some(dir.path().join("r.csv"));
    s.output.convergence = Some(dir.path().join("c.csv"));
    let rep = run_scenario(&s).unwrap();
    emit_outputs(&rep, &s.output).unwrap();
    let json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("r.json")).unwrap()).unwrap();
    assert_eq!(json["checks"].as_array().unwrap().len(), rep.checks.len());
    let csv = std::fs::read_to_string(dir.path().join("r.csv")).unwrap();
    assert_eq!(csv.lines().count(), rep.checks.len() + 1);
    assert!(std::fs::read_to_string(dir.path().join("c.csv")).unwrap().starts_with("table,r,hbar,residual"));
}
