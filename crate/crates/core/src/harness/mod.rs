//! The scenario runner: verification suites V1–V8 and the property suites,
//! scenario files, and deterministic JSON/CSV reports.
//!
//! A [`Scenario`] selects surfaces, suites, level schedules, evaluation
//! grids and tolerances.  [`run_scenario`] executes the selected suites and
//! returns a [`Report`] with one [`Check`] per measured quantity; requests
//! beyond what the engine implements are recorded as
//! [`Status::Skipped`] with the reason instead of failing.  Reports contain
//! no wall-clock data, so the same scenario always produces the same bytes.

mod properties;
mod suites;
pub mod tolerances;

pub use tolerances::Tolerances;

use crate::charvar::CharVarModel;
use crate::coloring::{anchor_coloring, Level, RealColoring};
use crate::curves::{parse_curve, standard_curve, MulticurveSpec, StandardKind};
use crate::error::{Error, Result};
use crate::fusion::graph_hash;
use crate::surface::graph::DecoratedGraph;
use crate::surface::TestSurface;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::collections::BTreeMap;
use std::fmt;
use std::io::Write;
use std::path::{Path, PathBuf};

/// Process exit status when every check passed (skips included).
pub const EXIT_PASS: i32 = 0;
/// Process exit status when at least one check failed.
pub const EXIT_FAIL: i32 = 1;
/// Process exit status for usage or configuration errors.
pub const EXIT_USAGE: i32 = 2;

/// Environment variable holding the worker-thread count.
pub const THREADS_ENV: &str = "CURVEOPS_THREADS";

/// Sizes the global worker pool from [`THREADS_ENV`] (no-op when unset or
/// when the pool already exists).
pub fn configure_threads() -> Result<()> {
    if let Ok(v) = std::env::var(THREADS_ENV) {
        let n: usize = v
            .trim()
            .parse()
            .map_err(|_| Error::Usage(format!("{THREADS_ENV}={v:?} is not a thread count")))?;
        // A pool configured earlier in the process is kept.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    Ok(())
}

/// A verification suite.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Suite {
    /// Eigenvalues of decomposition curves.
    V1,
    /// Dual-curve coefficients against closed forms.
    V2,
    /// Support, parity and Hermiticity.
    V3,
    /// Coefficient and operator-norm bounds.
    V4,
    /// The first-order identity and the vanishing default.
    V5,
    /// Principal symbols against trace functions.
    V6,
    /// The composite-symbol product formula.
    V7,
    /// Poisson brackets of the character-variety oracle.
    V8,
    /// Coloring enumeration against brute force.
    #[serde(rename = "enumeration")]
    Enumeration,
    /// Intersection signs against the algebra product.
    #[serde(rename = "intersection-sign")]
    IntersectionSign,
    /// Multiplicativity of characters.
    #[serde(rename = "characters")]
    Characters,
    /// Relation residuals of representations.
    #[serde(rename = "relations")]
    Relations,
    /// The SL₂ trace identity.
    #[serde(rename = "trace-identity")]
    TraceIdentity,
}

impl Suite {
    /// Every suite, in report order.
    pub const ALL: [Suite; 13] = [
        Suite::V1,
        Suite::V2,
        Suite::V3,
        Suite::V4,
        Suite::V5,
        Suite::V6,
        Suite::V7,
        Suite::V8,
        Suite::Enumeration,
        Suite::IntersectionSign,
        Suite::Characters,
        Suite::Relations,
        Suite::TraceIdentity,
    ];

    /// Report name.
    pub fn name(self) -> &'static str {
        match self {
            Suite::V1 => "V1",
            Suite::V2 => "V2",
            Suite::V3 => "V3",
            Suite::V4 => "V4",
            Suite::V5 => "V5",
            Suite::V6 => "V6",
            Suite::V7 => "V7",
            Suite::V8 => "V8",
            Suite::Enumeration => "enumeration",
            Suite::IntersectionSign => "intersection-sign",
            Suite::Characters => "characters",
            Suite::Relations => "relations",
            Suite::TraceIdentity => "trace-identity",
        }
    }

    /// One-line description.
    pub fn description(self) -> &'static str {
        match self {
            Suite::V1 => "decomposition-curve eigenvalues",
            Suite::V2 => "dual-curve closed forms",
            Suite::V3 => "support, parity and Hermiticity",
            Suite::V4 => "coefficient and norm bounds",
            Suite::V5 => "first-order identity and default",
            Suite::V6 => "principal symbol equals trace function",
            Suite::V7 => "composite-symbol product formula",
            Suite::V8 => "symplectic structure",
            Suite::Enumeration => "coloring enumeration vs brute force",
            Suite::IntersectionSign => "intersection sign vs algebra product",
            Suite::Characters => "character multiplicativity",
            Suite::Relations => "representation relation residuals",
            Suite::TraceIdentity => "SL2 trace identity",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .iter()
            .copied()
            .find(|x| x.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Usage(format!("unknown suite {s:?}")))
    }
}

/// Output locations of a scenario run.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Outputs {
    /// JSON report path.
    pub json: Option<PathBuf>,
    /// CSV report path (one row per check).
    pub csv: Option<PathBuf>,
    /// CSV convergence tables `(table, r, hbar, residual)`.
    pub convergence: Option<PathBuf>,
}

/// A verification scenario.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    /// Name echoed in the report.
    #[serde(default = "default_name")]
    pub name: String,
    /// Surfaces to run on.
    #[serde(default = "all_surfaces")]
    pub surfaces: Vec<TestSurface>,
    /// Curve identifiers replacing the default library in V1 (decomposition
    /// curves only), V3, V4, V5 and V6.
    #[serde(default)]
    pub curves: Vec<String>,
    /// Suites to run.
    #[serde(default = "all_suites")]
    pub suites: Vec<Suite>,
    /// Level schedules replacing the per-suite defaults.
    #[serde(default)]
    pub levels: BTreeMap<Suite, Vec<u32>>,
    /// Action anchors replacing the defaults of V5–V7 (internal-edge
    /// vectors).
    #[serde(default)]
    pub tau: Vec<Vec<f64>>,
    /// Angle grid replacing the default of V6.
    #[serde(default)]
    pub theta: Vec<Vec<f64>>,
    /// Tolerances.
    #[serde(default)]
    pub tolerances: Tolerances,
    /// Seed of the randomized suites.
    #[serde(default)]
    pub seed: u64,
    /// Output paths.
    #[serde(default)]
    pub output: Outputs,
}

fn default_name() -> String {
    "scenario".into()
}

fn all_surfaces() -> Vec<TestSurface> {
    TestSurface::ALL.to_vec()
}

fn all_suites() -> Vec<Suite> {
    Suite::ALL.to_vec()
}

impl Default for Scenario {
    fn default() -> Self {
        Scenario {
            name: default_name(),
            surfaces: all_surfaces(),
            curves: vec![],
            suites: all_suites(),
            levels: BTreeMap::new(),
            tau: vec![],
            theta: vec![],
            tolerances: Tolerances::default(),
            seed: 0,
            output: Outputs::default(),
        }
    }
}

impl Scenario {
    /// Parses a scenario, reporting malformed input as a usage error with
    /// its line and column.
    pub fn from_json(text: &str) -> Result<Self> {
        let s: Scenario = serde_json::from_str(text).map_err(|e| {
            Error::Usage(format!(
                "malformed scenario at line {}, column {}: {e}",
                e.line(),
                e.column()
            ))
        })?;
        s.validate()?;
        Ok(s)
    }

    /// Reads a scenario file; relative output paths are resolved against
    /// the file's directory.
    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Usage(format!("cannot read {}: {e}", path.display())))?;
        let mut s = Self::from_json(&text)?;
        let base = path.parent().unwrap_or(Path::new("."));
        for p in [&mut s.output.json, &mut s.output.csv, &mut s.output.convergence]
            .into_iter()
            .flatten()
        {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        }
        Ok(s)
    }

    /// Checks level schedules, curve identifiers and grid dimensions.
    pub fn validate(&self) -> Result<()> {
        if self.surfaces.is_empty() {
            return Err(Error::Usage("no surfaces selected".into()));
        }
        for &surface in &self.surfaces {
            let g = surface.graph();
            for (suite, levels) in &self.levels {
                if *suite == Suite::V2 {
                    // V2 picks boundary fractions per level.
                    continue;
                }
                for &r in levels {
                    level_feasible(&g, r).map_err(|e| {
                        Error::Usage(format!("{suite} on {surface}: {e}"))
                    })?;
                }
            }
            for id in &self.curves {
                parse_curve(&g, id)
                    .map_err(|e| Error::Usage(format!("curve {id:?} on {surface}: {e}")))?;
            }
            let n = g.internal_edges.len();
            for v in self.tau.iter().chain(&self.theta) {
                if v.len() != n {
                    return Err(Error::Usage(format!(
                        "{surface} has {n} internal edges but a grid point has {} entries",
                        v.len()
                    )));
                }
            }
            for t in &self.tau {
                if !RealColoring::from_internal(&g, t)?.in_domain(&g) {
                    return Err(Error::Usage(format!(
                        "τ = {t:?} lies outside the admissible domain of {surface}"
                    )));
                }
            }
        }
        Ok(())
    }

    /// SHA-256 of the scenario's canonical JSON form, output paths
    /// excluded (they do not affect results).
    pub fn hash(&self) -> String {
        let canonical = Scenario {
            output: Outputs::default(),
            ..self.clone()
        };
        let bytes = serde_json::to_vec(&canonical).expect("scenarios serialize");
        hex(&Sha256::digest(bytes))
    }
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

/// Whether `r` is a usable level on `g`: the boundary colors exist and an
/// admissible coloring exists near the middle of the domain.
pub fn level_feasible(g: &DecoratedGraph, r: u32) -> Result<()> {
    let level = Level::new(g, r)?;
    let middle = RealColoring::from_internal(g, &vec![0.5; g.internal_edges.len()])?;
    anchor_coloring(g, &level, &middle, 3).map_err(|_| {
        Error::Level(format!(
            "no admissible coloring at r = {r} (boundary colors {:?} violate parity)",
            level.boundary
        ))
    })?;
    Ok(())
}

/// Outcome of one check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Status {
    /// Within tolerance.
    Pass,
    /// Outside tolerance, or an error occurred.
    Fail,
    /// Outside the implemented capabilities; not counted as a failure.
    Skipped,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skipped => "SKIPPED",
        })
    }
}

/// One measured quantity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    /// The suite.
    pub suite: Suite,
    /// Identifier such as `torus/D_e/r=100`.
    pub name: String,
    /// Measured value (`None` for skipped or exactly vanishing quantities).
    pub measured: Option<f64>,
    /// Expected value.
    pub expected: f64,
    /// Tolerance (its meaning — absolute, relative, window — depends on the
    /// check and is stated in `detail`).
    pub tolerance: f64,
    /// Outcome.
    pub status: Status,
    /// Explanation, skip reason or error message.
    pub detail: String,
}

impl Check {
    /// `measured ≤ tolerance` against an expected zero.
    pub fn at_most(suite: Suite, name: String, measured: f64, tolerance: f64, detail: &str) -> Self {
        Check {
            suite,
            name,
            measured: Some(measured),
            expected: 0.0,
            tolerance,
            status: if measured <= tolerance { Status::Pass } else { Status::Fail },
            detail: detail.to_string(),
        }
    }

    /// `|measured − expected| ≤ tolerance`.
    pub fn near(
        suite: Suite,
        name: String,
        measured: f64,
        expected: f64,
        tolerance: f64,
        detail: &str,
    ) -> Self {
        Check {
            suite,
            name,
            measured: Some(measured),
            expected,
            tolerance,
            status: if (measured - expected).abs() <= tolerance {
                Status::Pass
            } else {
                Status::Fail
            },
            detail: detail.to_string(),
        }
    }

    /// A check that could not be evaluated: skipped for capability
    /// boundaries, failed otherwise.
    pub fn from_error(suite: Suite, name: String, err: &Error) -> Self {
        let status = match err {
            Error::Capability(_) | Error::NotInWordTable(_) => Status::Skipped,
            _ => Status::Fail,
        };
        Check {
            suite,
            name,
            measured: None,
            expected: 0.0,
            tolerance: 0.0,
            status,
            detail: err.to_string(),
        }
    }
}

/// A `(r, residual)` series for log–log plotting.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceTable {
    /// Identifier.
    pub name: String,
    /// Levels.
    pub levels: Vec<u32>,
    /// Residuals.
    pub residuals: Vec<f64>,
}

/// Run metadata (no wall-clock data).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Metadata {
    /// Tool name.
    pub tool: String,
    /// Crate version.
    pub version: String,
    /// Scenario name.
    pub scenario: String,
    /// SHA-256 of the scenario.
    pub scenario_hash: String,
    /// SHA-256 of each surface's graph.
    pub graph_hashes: BTreeMap<String, String>,
    /// Seed of the randomized suites.
    pub seed: u64,
}

/// The outcome of a scenario.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    /// Metadata.
    pub metadata: Metadata,
    /// Checks in execution order.
    pub checks: Vec<Check>,
    /// Convergence tables.
    pub tables: Vec<ConvergenceTable>,
}

impl Report {
    /// Whether no check failed.
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != Status::Fail)
    }

    /// The process exit status for this report.
    pub fn exit_code(&self) -> i32 {
        if self.passed() {
            EXIT_PASS
        } else {
            EXIT_FAIL
        }
    }

    /// Checks of one suite.
    pub fn suite_checks(&self, suite: Suite) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(move |c| c.suite == suite)
    }

    /// Status of a suite: failed if any check failed, skipped if every
    /// check was skipped, `None` when it has no checks.
    pub fn suite_status(&self, suite: Suite) -> Option<Status> {
        let mut any = false;
        let mut all_skipped = true;
        for c in self.suite_checks(suite) {
            any = true;
            if c.status == Status::Fail {
                return Some(Status::Fail);
            }
            all_skipped &= c.status == Status::Skipped;
        }
        any.then_some(if all_skipped { Status::Skipped } else { Status::Pass })
    }

    /// One line per suite present: `V1 PASS 27 checks (0 skipped) — …`.
    pub fn summary(&self) -> Vec<String> {
        Suite::ALL
            .iter()
            .filter_map(|&s| {
                let status = self.suite_status(s)?;
                let n = self.suite_checks(s).count();
                let skipped = self.suite_checks(s).filter(|c| c.status == Status::Skipped).count();
                Some(format!(
                    "{s} {status} {n} checks ({skipped} skipped) — {}",
                    s.description()
                ))
            })
            .collect()
    }
}

/// Report serialization formats.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    /// Pretty-printed JSON.
    Json,
    /// One CSV row per check.
    Csv,
}

/// Writes a report; field order and number formatting are fixed, so equal
/// reports give equal bytes.
pub fn write_report<W: Write>(rep: &Report, format: ReportFormat, mut w: W) -> Result<()> {
    match format {
        ReportFormat::Json => {
            serde_json::to_writer_pretty(&mut w, rep)?;
            writeln!(w)?;
        }
        ReportFormat::Csv => {
            let mut out = csv::Writer::from_writer(w);
            let io = |e: csv::Error| Error::Io(e.to_string());
            out.write_record(["suite", "name", "measured", "expected", "tolerance", "status", "detail"])
                .map_err(io)?;
            for c in &rep.checks {
                out.write_record([
                    c.suite.name().to_string(),
                    c.name.clone(),
                    c.measured.map(|x| x.to_string()).unwrap_or_default(),
                    c.expected.to_string(),
                    c.tolerance.to_string(),
                    c.status.to_string(),
                    c.detail.clone(),
                ])
                .map_err(io)?;
            }
            out.flush()?;
        }
    }
    Ok(())
}

/// Writes the convergence tables as CSV rows `(table, r, hbar, residual)`.
pub fn write_convergence<W: Write>(rep: &Report, w: W) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    let io = |e: csv::Error| Error::Io(e.to_string());
    out.write_record(["table", "r", "hbar", "residual"]).map_err(io)?;
    for t in &rep.tables {
        for (r, x) in t.levels.iter().zip(&t.residuals) {
            out.write_record([
                t.name.clone(),
                r.to_string(),
                (1.0 / *r as f64).to_string(),
                x.to_string(),
            ])
            .map_err(io)?;
        }
    }
    out.flush()?;
    Ok(())
}

/// Writes a report to a file.
pub fn emit_report(rep: &Report, format: ReportFormat, path: &Path) -> Result<()> {
    let file = std::fs::File::create(path)
        .map_err(|e| Error::Io(format!("cannot write {}: {e}", path.display())))?;
    write_report(rep, format, std::io::BufWriter::new(file))
}

/// Writes every output requested by the scenario.
pub fn emit_outputs(rep: &Report, out: &Outputs) -> Result<()> {
    if let Some(p) = &out.json {
        emit_report(rep, ReportFormat::Json, p)?;
    }
    if let Some(p) = &out.csv {
        emit_report(rep, ReportFormat::Csv, p)?;
    }
    if let Some(p) = &out.convergence {
        let file = std::fs::File::create(p)
            .map_err(|e| Error::Io(format!("cannot write {}: {e}", p.display())))?;
        write_convergence(rep, std::io::BufWriter::new(file))?;
    }
    Ok(())
}

/// Everything a suite needs about one surface.
pub(crate) struct SurfaceCtx<'a> {
    pub surface: TestSurface,
    pub graph: DecoratedGraph,
    pub scenario: &'a Scenario,
    pub tol: &'a Tolerances,
}

impl SurfaceCtx<'_> {
    /// Levels of a suite: the scenario override or the default schedule.
    pub fn levels(&self, suite: Suite) -> Vec<u32> {
        self.scenario
            .levels
            .get(&suite)
            .cloned()
            .unwrap_or_else(|| default_levels(self.surface, suite))
    }

    /// The curve list: the scenario's identifiers or the default library.
    pub fn curves(&self) -> Result<Vec<MulticurveSpec>> {
        if self.scenario.curves.is_empty() {
            library_curves(self.surface, &self.graph)
        } else {
            self.scenario
                .curves
                .iter()
                .map(|c| parse_curve(&self.graph, c))
                .collect()
        }
    }

    /// Action anchors of V5–V7.
    pub fn anchors(&self, suite: Suite) -> Vec<Vec<f64>> {
        if !self.scenario.tau.is_empty() {
            return self.scenario.tau.clone();
        }
        default_anchors(self.surface, suite)
    }

    /// `surface/…` check names.
    pub fn name(&self, rest: impl fmt::Display) -> String {
        format!("{}/{rest}", self.surface)
    }
}

/// The default level schedule of a suite on a surface.
///
/// The punctured torus needs `r/4` odd (the leg color is `r/4`), the
/// four-holed sphere needs `4 | r`; the asymptotic suites use `r = 20·odd`
/// (planar) or `10·odd` (genus two) so that the default anchors are realized
/// exactly.
pub fn default_levels(surface: TestSurface, suite: Suite) -> Vec<u32> {
    use TestSurface::*;
    let odd = |m: u32, list: &[u32]| list.iter().map(|o| m * o).collect::<Vec<_>>();
    match (suite, surface) {
        (Suite::V1, Torus) => vec![4, 12, 20, 28, 36],
        (Suite::V1, _) => vec![8, 12, 16, 20, 24, 28, 32, 36, 40],
        (Suite::V2, _) => vec![20, 50, 100, 200],
        (Suite::V3, Torus) => vec![12, 20, 44, 100],
        (Suite::V3, _) => vec![12, 20, 40, 100],
        (Suite::V4, Torus) => vec![20, 52, 100, 196],
        (Suite::V4, _) => vec![20, 52, 100, 200],
        (Suite::V5 | Suite::V7, Genus2) => odd(10, &[11, 15, 23, 35, 47, 71, 103, 159]),
        (Suite::V5 | Suite::V7, _) => odd(20, &[5, 7, 11, 17, 23, 35, 51, 79]),
        (Suite::V6, Genus2) => odd(10, &SYMBOL_ODD),
        (Suite::V6, _) => odd(20, &SYMBOL_ODD),
        (Suite::Enumeration, Torus) => vec![4],
        (Suite::Enumeration, Sphere4) => vec![4, 8],
        (Suite::Enumeration, Genus2) => vec![3, 4, 5, 6, 7, 8],
        (Suite::IntersectionSign, Torus) => vec![20],
        (Suite::IntersectionSign, _) => vec![16],
        _ => vec![],
    }
}

const SYMBOL_ODD: [u32; 13] = [11, 17, 23, 35, 51, 79, 117, 157, 231, 351, 531, 797, 1197];

/// Default action anchors of the asymptotic suites.
pub fn default_anchors(surface: TestSurface, suite: Suite) -> Vec<Vec<f64>> {
    use TestSurface::*;
    match (suite, surface) {
        (Suite::V6, Torus) => [0.2, 0.3, 0.5, 0.7, 0.8].iter().map(|&t| vec![t]).collect(),
        (Suite::V6, Sphere4) => [0.3, 0.4, 0.5, 0.6, 0.7].iter().map(|&t| vec![t]).collect(),
        (Suite::V6, Genus2) => vec![
            vec![0.1, 0.4, 0.4],
            vec![0.3, 0.4, 0.4],
            vec![0.5, 0.4, 0.4],
            vec![0.7, 0.4, 0.4],
            vec![0.5, 0.6, 0.6],
        ],
        (Suite::V7, Genus2) => vec![vec![0.3, 0.4, 0.4]],
        (Suite::V7, _) => vec![vec![0.4]],
        (_, Torus) => vec![vec![0.3], vec![0.6]],
        (_, Sphere4) => vec![vec![0.4], vec![0.6]],
        (_, Genus2) => vec![vec![0.3, 0.4, 0.4], vec![0.5, 0.6, 0.6]],
    }
}

/// Default angle grid of V6: five points, staggered across edges.
pub fn default_angles(n: usize) -> Vec<Vec<f64>> {
    (0..5)
        .map(|j| (0..n).map(|i| -2.5 + 1.25 * j as f64 + 0.3 * i as f64).collect())
        .collect()
}

/// The default curve library of a surface: for every internal edge `C_e`,
/// `D_e`, `tw±1(D_e)`, `2*C_e` and `2*D_e`; on genus two also every
/// `C_e + D_f` (`e ≠ f`) and `C_e1 + C_e2 + C_e3`.
pub fn library_curves(surface: TestSurface, g: &DecoratedGraph) -> Result<Vec<MulticurveSpec>> {
    let mut out = Vec::new();
    for &e in &g.internal_edges {
        let c = standard_curve(g, StandardKind::Decomposition, e)?;
        let d = standard_curve(g, StandardKind::Dual, e)?;
        out.push(c.clone());
        out.push(d.clone());
        out.push(standard_curve(g, StandardKind::TwistedDual(1), e)?);
        out.push(standard_curve(g, StandardKind::TwistedDual(-1), e)?);
        out.push(c.power(2, g)?);
        out.push(d.power(2, g)?);
    }
    if surface == TestSurface::Genus2 {
        for &e in &g.internal_edges {
            for &f in &g.internal_edges {
                if e != f {
                    let c = standard_curve(g, StandardKind::Decomposition, e)?;
                    out.push(c.union(&standard_curve(g, StandardKind::Dual, f)?, g)?);
                }
            }
        }
        let mut all = standard_curve(g, StandardKind::Decomposition, g.internal_edges[0])?;
        for &e in &g.internal_edges[1..] {
            all = all.union(&standard_curve(g, StandardKind::Decomposition, e)?, g)?;
        }
        out.push(all);
    }
    Ok(out)
}

/// Runs every selected suite on every selected surface.
pub fn run_scenario(s: &Scenario) -> Result<Report> {
    s.validate()?;
    let tol = &s.tolerances;
    let mut checks = Vec::new();
    let mut tables = Vec::new();
    let mut graph_hashes = BTreeMap::new();
    let mut suites = s.suites.clone();
    suites.sort();
    suites.dedup();
    for &surface in &s.surfaces {
        let g = surface.graph();
        graph_hashes.insert(surface.name().to_string(), graph_hash(&g));
    }
    for &suite in &suites {
        for &surface in &s.surfaces {
            let ctx = SurfaceCtx {
                surface,
                graph: surface.graph(),
                scenario: s,
                tol,
            };
            let (c, t) = run_suite(suite, &ctx);
            checks.extend(c);
            tables.extend(t);
        }
    }
    Ok(Report {
        metadata: Metadata {
            tool: "curveops".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            scenario: s.name.clone(),
            scenario_hash: s.hash(),
            graph_hashes,
            seed: s.seed,
        },
        checks,
        tables,
    })
}

fn run_suite(suite: Suite, ctx: &SurfaceCtx) -> (Vec<Check>, Vec<ConvergenceTable>) {
    let out = match suite {
        Suite::V1 => suites::v1(ctx),
        Suite::V2 => suites::v2(ctx),
        Suite::V3 => suites::v3(ctx),
        Suite::V4 => suites::v4(ctx),
        Suite::V5 => suites::v5(ctx),
        Suite::V6 => suites::v6(ctx),
        Suite::V7 => suites::v7(ctx),
        Suite::V8 => suites::v8(ctx),
        Suite::Enumeration => properties::enumeration(ctx),
        Suite::IntersectionSign => properties::intersection_sign_suite(ctx),
        Suite::Characters => properties::characters_suite(ctx),
        Suite::Relations => properties::relations(ctx),
        Suite::TraceIdentity => properties::trace_identity(ctx),
    };
    match out {
        Ok(x) => x,
        Err(e) => (vec![Check::from_error(suite, ctx.name("setup"), &e)], vec![]),
    }
}

/// The character-variety model of a surface (shared by several suites).
pub(crate) fn model(ctx: &SurfaceCtx) -> Result<CharVarModel> {
    CharVarModel::with_graph(ctx.surface, ctx.graph.clone())
}

/// Formats a value with two significant digits.
pub fn two_significant(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    // Round first so that e.g. 0.9997 reads "1.0" rather than "1.00".
    let rounded: f64 = format!("{x:.1e}").parse().unwrap_or(x);
    let digits = 1 - rounded.abs().log10().floor() as i32;
    format!("{:.*}", digits.max(0) as usize, rounded)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_significant_digits() {
        assert_eq!(two_significant(1.00002), "1.0");
        assert_eq!(two_significant(std::f64::consts::PI), "3.1");
        assert_eq!(two_significant(0.15915), "0.16");
        assert_eq!(two_significant(0.9997), "1.0");
        assert_eq!(two_significant(12.3), "12");
    }

    #[test]
    fn default_schedules_are_feasible() {
        for s in TestSurface::ALL {
            let g = s.graph();
            for suite in Suite::ALL {
                if suite == Suite::V2 {
                    continue;
                }
                for r in default_levels(s, suite) {
                    level_feasible(&g, r).unwrap_or_else(|e| panic!("{suite} {s} r={r}: {e}"));
                }
            }
        }
    }

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
            let j = serde_json::to_string(&s).unwrap();
            assert_eq!(j, format!("\"{}\"", s.name()));
        }
    }

    #[test]
    fn malformed_scenario_reports_location() {
        let e = Scenario::from_json("{\n  \"suites\": [\"V1\",]\n}").unwrap_err();
        match e {
            Error::Usage(m) => assert!(m.contains("line 2"), "{m}"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn infeasible_level_is_a_usage_error() {
        let e = Scenario::from_json(r#"{"surfaces": ["torus"], "levels": {"V1": [40]}}"#).unwrap_err();
        assert!(matches!(e, Error::Usage(_)));
    }
}
