//! Default tolerances of the verification suites.
//!
//! Every value can be overridden per scenario through [`Tolerances`]; the
//! constants here are the defaults the acceptance run uses.

use serde::{Deserialize, Serialize};

/// Relative accuracy of the decomposition-curve eigenvalues (V1).
pub const EIGENVALUE: f64 = 1e-12;
/// Relative accuracy of the dual-curve closed forms (V2).
pub const CLOSED_FORM: f64 = 1e-10;
/// Hermiticity defect `|F_{−k}(c+k) − conj F_k(c)|` (V3).
pub const HERMITICITY: f64 = 1e-12;
/// Relative slack on the bounds `2^{n(γ)}` (V4).
pub const BOUND_SLACK: f64 = 1e-12;
/// The default must be at most this multiple of the fit-residual bound (V5).
pub const DEFAULT_FACTOR: f64 = 5.0;
/// Expected log–log slope of second-order remainders (V5, V7).
pub const SLOPE: f64 = 2.0;
/// Half-width of the accepted slope window (V5, V7).
pub const SLOPE_WINDOW: f64 = 0.3;
/// Principal symbol against trace functions on planar test surfaces (V6).
pub const TRACE_PLANAR: f64 = 1e-6;
/// Principal symbol against trace functions on genus two (V6).
pub const TRACE_GENUS2: f64 = 1e-5;
/// Polynomial degree of the extrapolation used for the principal symbol
/// (V6): the first-order model plus three nuisance terms.
pub const TRACE_DEGREE: usize = 4;
/// Accepted deviation of the fitted bracket constant from 1 (V7).
pub const BRACKET_CONSTANT: f64 = 0.05;
/// `{h_{C_e}, h_{C_f}} = 0` (V8).
pub const COMMUTING: f64 = 1e-8;
/// `{h_{C_e}, f} = ∂_{θ_e} f` (V8).
pub const FLOW: f64 = 1e-6;
/// Central-difference step for Poisson brackets (V8).
pub const FD_STEP: f64 = 1e-5;
/// Finite-difference against exact angle derivatives (V8).
pub const GRADIENT: f64 = 1e-6;
/// Random observables per surface (V8).
pub const OBSERVABLES: usize = 20;
/// Defining relations and boundary conditions of representations.
pub const RELATION: f64 = 1e-10;
/// The SL₂ trace identity `f_a f_b = −(f_{ab} + f_{ab⁻¹})`.
pub const TRACE_IDENTITY: f64 = 1e-12;
/// Operator products against row products (sign bookkeeping).
pub const COMPOSITE_SIGN: f64 = 1e-12;
/// Random points per surface in the randomized property suites.
pub const RANDOM_POINTS: usize = 20;

/// Tolerances of one scenario; any field omitted in JSON takes its default.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    /// See [`EIGENVALUE`].
    pub eigenvalue: f64,
    /// See [`CLOSED_FORM`].
    pub closed_form: f64,
    /// See [`HERMITICITY`].
    pub hermiticity: f64,
    /// See [`BOUND_SLACK`].
    pub bound_slack: f64,
    /// See [`DEFAULT_FACTOR`].
    pub default_factor: f64,
    /// See [`SLOPE`].
    pub slope: f64,
    /// See [`SLOPE_WINDOW`].
    pub slope_window: f64,
    /// See [`TRACE_PLANAR`].
    pub trace_planar: f64,
    /// See [`TRACE_GENUS2`].
    pub trace_genus2: f64,
    /// See [`TRACE_DEGREE`].
    pub trace_degree: usize,
    /// See [`BRACKET_CONSTANT`].
    pub bracket_constant: f64,
    /// See [`COMMUTING`].
    pub commuting: f64,
    /// See [`FLOW`].
    pub flow: f64,
    /// See [`FD_STEP`].
    pub fd_step: f64,
    /// See [`GRADIENT`].
    pub gradient: f64,
    /// See [`OBSERVABLES`].
    pub observables: usize,
    /// See [`RELATION`].
    pub relation: f64,
    /// See [`TRACE_IDENTITY`].
    pub trace_identity: f64,
    /// See [`COMPOSITE_SIGN`].
    pub composite_sign: f64,
    /// See [`RANDOM_POINTS`].
    pub random_points: usize,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            eigenvalue: EIGENVALUE,
            closed_form: CLOSED_FORM,
            hermiticity: HERMITICITY,
            bound_slack: BOUND_SLACK,
            default_factor: DEFAULT_FACTOR,
            slope: SLOPE,
            slope_window: SLOPE_WINDOW,
            trace_planar: TRACE_PLANAR,
            trace_genus2: TRACE_GENUS2,
            trace_degree: TRACE_DEGREE,
            bracket_constant: BRACKET_CONSTANT,
            commuting: COMMUTING,
            flow: FLOW,
            fd_step: FD_STEP,
            gradient: GRADIENT,
            observables: OBSERVABLES,
            relation: RELATION,
            trace_identity: TRACE_IDENTITY,
            composite_sign: COMPOSITE_SIGN,
            random_points: RANDOM_POINTS,
        }
    }
}
