//! Curve operators of the SU(2) quantum TQFT at level `r`, their ψ-symbols,
//! and an independent SU(2) character-variety oracle to check them against.
//!
//! The crate is organised bottom-up:
//!
//! * [`surface`] — banded trivalent graphs, relative Z/2 homology, the
//!   intersection algebra `A_Γ` and its characters, the sign cocycle;
//! * [`coloring`] — quantum integers, admissible colorings, vertex weights
//!   and norms;
//! * [`curves`] — multicurves in Dehn position, the supported curve library
//!   and the curve-to-word tables of the three test surfaces;
//! * [`fusion`] — fusion coefficients, recoupling, and assembly of the sparse
//!   operator `T_r^γ` in the orthonormal basis `φ_c`;
//! * [`symbol`] — ψ-symbols read from operator rows, extrapolation in
//!   `ħ = 1/r`, the first-order correction `Δ_γ` and the default `D_γ`;
//! * [`charvar`] — SU(2) representations in action-angle coordinates, trace
//!   functions and Poisson brackets;
//! * [`harness`] — the verification suites and the scenario runner behind the
//!   `curveops` command-line tool.

pub mod charvar;
pub mod coloring;
pub mod curves;
pub mod error;
pub mod fusion;
pub mod surface;
pub mod harness;
pub mod symbol;

pub use error::{Error, Result};

/// The user guide in `book/`, compiled so that its examples stay in sync
/// with the API.
#[cfg(doctest)]
pub mod guide {
    #[doc = include_str!("../../../README.md")]
    pub mod readme {}
    #[doc = include_str!("../../../book/src/introduction.md")]
    pub mod introduction {}
    #[doc = include_str!("../../../book/src/surfaces.md")]
    pub mod surfaces {}
    #[doc = include_str!("../../../book/src/curves.md")]
    pub mod curves {}
    #[doc = include_str!("../../../book/src/operators.md")]
    pub mod operators {}
    #[doc = include_str!("../../../book/src/symbols.md")]
    pub mod symbols {}
    #[doc = include_str!("../../../book/src/charvar.md")]
    pub mod charvar {}
    #[doc = include_str!("../../../book/src/harness.md")]
    pub mod harness {}
}
