//! Acceptance run: every verification criterion and property suite on every
//! test surface with the default tolerances, one line per criterion.
//!
//! Runs as a plain binary (no test harness) so the lines are always printed.

use curveops::harness::{run_scenario, tolerances, Scenario, Status, Suite};
use std::process::ExitCode;
use std::time::{Duration, Instant};

/// Wall-clock budgets of the criteria that have one.
fn budget(suite: Suite) -> Option<Duration> {
    match suite {
        Suite::V1 => Some(Duration::from_secs(10)),
        Suite::V2 => Some(Duration::from_secs(30)),
        Suite::V5 => Some(Duration::from_secs(300)),
        _ => None,
    }
}

/// The pinned tolerances of each criterion, for the printed line.
fn pinned(suite: Suite) -> String {
    use tolerances::*;
    match suite {
        Suite::V1 => format!("rel {EIGENVALUE:e}"),
        Suite::V2 => format!("rel {CLOSED_FORM:e}"),
        Suite::V3 => format!("abs {HERMITICITY:e}"),
        Suite::V4 => format!("slack {BOUND_SLACK:e}"),
        Suite::V5 => format!("default ≤ {DEFAULT_FACTOR}×bound, slope {SLOPE}±{SLOPE_WINDOW}"),
        Suite::V6 => format!("planar {TRACE_PLANAR:e}, genus two {TRACE_GENUS2:e}"),
        Suite::V7 => format!("slope {SLOPE}±{SLOPE_WINDOW}, κ 1±{BRACKET_CONSTANT}"),
        Suite::V8 => format!("commuting {COMMUTING:e}, flow {FLOW:e}, gradient {GRADIENT:e}"),
        Suite::Enumeration | Suite::Characters => "exact".into(),
        Suite::IntersectionSign => format!("exact, composite {COMPOSITE_SIGN:e}"),
        Suite::Relations => format!("abs {RELATION:e}"),
        Suite::TraceIdentity => format!("rel {TRACE_IDENTITY:e}"),
    }
}

fn main() -> ExitCode {
    let mut failures = Vec::new();
    for suite in Suite::ALL {
        let scenario = Scenario {
            name: format!("acceptance-{suite}"),
            suites: vec![suite],
            ..Scenario::default()
        };
        let start = Instant::now();
        let report = match run_scenario(&scenario) {
            Ok(r) => r,
            Err(e) => {
                println!("{suite} FAIL setup error: {e}");
                failures.push(suite.to_string());
                continue;
            }
        };
        let elapsed = start.elapsed();
        let checks: Vec<_> = report.suite_checks(suite).collect();
        let count = |s: Status| checks.iter().filter(|c| c.status == s).count();
        let over_budget = budget(suite).is_some_and(|b| elapsed > b);
        let status = match report.suite_status(suite) {
            Some(Status::Pass) if !over_budget => "PASS",
            Some(Status::Skipped) => "SKIPPED",
            _ => "FAIL",
        };
        let budget_note = budget(suite)
            .map(|b| format!(" (budget {}s)", b.as_secs()))
            .unwrap_or_default();
        println!(
            "{:<17} {status:<7} {:>4} pass {:>3} fail {:>3} skipped  {:>7.1}s{budget_note}  [{}] {}",
            suite.name(),
            count(Status::Pass),
            count(Status::Fail),
            count(Status::Skipped),
            elapsed.as_secs_f64(),
            pinned(suite),
            suite.description(),
        );
        for c in checks.iter().filter(|c| c.status == Status::Fail) {
            println!("    failed: {} measured {:?} tolerance {:e}: {}", c.name, c.measured, c.tolerance, c.detail);
        }
        if status != "PASS" {
            failures.push(suite.to_string());
        }
    }
    if failures.is_empty() {
        println!("acceptance: all {} criteria pass", Suite::ALL.len());
        ExitCode::SUCCESS
    } else {
        println!("acceptance: failing criteria: {}", failures.join(", "));
        ExitCode::FAILURE
    }
}
