//! Marked surfaces through their banded trivalent graphs: graph validation,
//! relative Z/2 homology, the intersection algebra and its characters, the
//! sign cocycle `c̄`, and the projection `p_*` of multicurves.

pub mod graph;
pub mod homology;
pub mod standard;

pub use graph::{build_graph, DecoratedGraph, EdgeKind, GraphSpec, VertexKind};
pub use homology::{
    algebra_mul, characters, cycle_intersection, product_sign, rel_h1_basis, AlgebraElement, Character,
    H1Basis, RelH1Class,
};
pub use standard::TestSurface;

use crate::coloring::AdmissibleColoring;
use crate::curves::MulticurveSpec;
use crate::error::{Error, Result};

/// The sign cocycle `c̄(γ) = ∏_e (−1)^{(c_e−1)(C′_e(γ) + C″_e(γ))}`.
pub fn cocycle_sign(c: &AdmissibleColoring, gamma: &MulticurveSpec) -> Result<f64> {
    if c.colors.len() != gamma.crossings.len() {
        return Err(Error::Mismatch(
            "coloring and curve live on different graphs".into(),
        ));
    }
    let exponent: u64 = c
        .colors
        .iter()
        .zip(&gamma.crossings)
        .map(|(&ce, x)| (ce as u64 - 1) * (x[0] + x[1]) as u64)
        .sum();
    Ok(if exponent % 2 == 0 { 1.0 } else { -1.0 })
}

/// Per-edge parities of `C′_e + C″_e` for the internal edges (legs carry no
/// relative class).
pub fn traversal_parities(g: &DecoratedGraph, gamma: &MulticurveSpec) -> Vec<u8> {
    (0..g.num_edges())
        .map(|e| {
            if g.is_internal(e) {
                ((gamma.crossings[e][0] + gamma.crossings[e][1]) % 2) as u8
            } else {
                0
            }
        })
        .collect()
}

/// The class `p_*(γ)` in `H₁(Γ, ∂Γ; Z/2)`.
pub fn project_class(g: &DecoratedGraph, basis: &H1Basis, gamma: &MulticurveSpec) -> RelH1Class {
    basis.class_of_edge_parities(&traversal_parities(g, gamma))
}

/// The intersection sign `i(γ, δ) = ∏_e (−1)^{I_e^δ (C′_e(γ) + C″_e(γ))}`.
pub fn intersection_sign(gamma: &MulticurveSpec, delta: &MulticurveSpec) -> f64 {
    let exponent: u64 = gamma
        .crossings
        .iter()
        .zip(&delta.intersections)
        .map(|(x, &i)| (x[0] + x[1]) as u64 * i as u64)
        .sum();
    if exponent % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Sign of the boundary of the hexagon at vertex `v`: the cocycle evaluated
/// on a curve running once around the three cells at `v`.
pub fn hexagon_boundary_sign(g: &DecoratedGraph, c: &AdmissibleColoring, v: usize) -> f64 {
    // The boundary of a hexagon crosses each of the three cells C′ (or C″)
    // adjacent to v once, and each of those cells belongs to one incident
    // edge-end; a loop edge contributes its two ends.
    let exponent: u64 = g.vertices[v]
        .cyclic
        .iter()
        .map(|&end| c.colors[g.ends[end].edge] as u64 - 1)
        .sum();
    // c_e + c_f + c_g − 3 is even because the vertex sum is odd.
    if exponent % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}
