//! Relative Z/2 homology of a banded graph, its intersection form, the
//! twisted group algebra `A_Γ`, and its characters (quadratic refinements).
//!
//! Relative classes in `H₁(Γ, ∂Γ; Z/2)` are represented by their coordinates
//! against the fundamental cycles of a spanning tree of the internal graph:
//! the `j`-th coordinate of a relative class with edge-parity vector `v` is
//! `Σ_e v_e (z_j)_e mod 2`, which is insensitive to adding vertex stars.
//!
//! The intersection number of two cycles is computed by pushing the second
//! cycle into the corners of the ribbon structure: near every vertex it runs
//! through the corner between the two ends it uses, and it changes side of an
//! edge exactly when the two corners it occupies at the ends of that edge lie
//! on opposite sides.  Each such side change along an edge also used by the
//! first cycle is one transverse crossing.

use super::graph::DecoratedGraph;
use crate::error::{Error, Result};
use num_complex::Complex64;
use serde::Serialize;
use std::collections::{BTreeMap, VecDeque};

/// A class in `H₁(Γ, ∂Γ; Z/2)`, stored as a bit-vector over the fundamental
/// cycle basis (bit `j` ↔ basis class `j`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct RelH1Class(pub u64);

impl RelH1Class {
    /// The zero class.
    pub const ZERO: RelH1Class = RelH1Class(0);

    /// Componentwise sum mod 2.
    pub fn add(self, other: RelH1Class) -> RelH1Class {
        RelH1Class(self.0 ^ other.0)
    }

    /// The `j`-th basis class.
    pub fn basis(j: usize) -> RelH1Class {
        RelH1Class(1 << j)
    }

    /// Coordinate `j`.
    pub fn bit(self, j: usize) -> u8 {
        ((self.0 >> j) & 1) as u8
    }
}

/// A basis of `H₁(Γ, ∂Γ; Z/2)` with its intersection matrix.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct H1Basis {
    /// Edges of the spanning tree of the internal graph.
    pub tree_edges: Vec<usize>,
    /// The complement edges, one per basis class, in edge order.
    pub cotree_edges: Vec<usize>,
    /// Fundamental cycles as 0/1 vectors over all edges.
    pub cycles: Vec<Vec<u8>>,
    /// Symmetric intersection matrix over Z/2 with zero diagonal.
    pub intersection: Vec<Vec<u8>>,
}

impl H1Basis {
    /// Dimension of the homology group (the genus).
    pub fn dim(&self) -> usize {
        self.cycles.len()
    }

    /// Bilinear intersection pairing of two classes.
    pub fn pairing(&self, a: RelH1Class, b: RelH1Class) -> u8 {
        let mut s = 0u8;
        for i in 0..self.dim() {
            for j in 0..self.dim() {
                s ^= a.bit(i) & b.bit(j) & self.intersection[i][j];
            }
        }
        s
    }

    /// The class of a relative cycle given by per-edge parities.
    pub fn class_of_edge_parities(&self, parities: &[u8]) -> RelH1Class {
        let mut bits = 0u64;
        for (j, z) in self.cycles.iter().enumerate() {
            let s = z
                .iter()
                .zip(parities)
                .fold(0u8, |acc, (&a, &b)| acc ^ (a & b & 1));
            bits |= (s as u64) << j;
        }
        RelH1Class(bits)
    }
}

/// Computes the fundamental-cycle basis and the intersection matrix.
pub fn rel_h1_basis(g: &DecoratedGraph) -> H1Basis {
    let internal: Vec<usize> = g.internal_vertices().collect();
    let mut in_tree = vec![false; g.num_edges()];
    let mut parent: BTreeMap<usize, (usize, usize)> = BTreeMap::new();
    let mut seen = vec![false; g.vertices.len()];
    let root = internal[0];
    seen[root] = true;
    let mut queue = VecDeque::from([root]);
    while let Some(v) = queue.pop_front() {
        for &e in &g.internal_edges {
            let [x, y] = g.edges[e].ends;
            let (a, b) = (g.ends[x].vertex, g.ends[y].vertex);
            for (from, to) in [(a, b), (b, a)] {
                if from == v && !seen[to] {
                    seen[to] = true;
                    in_tree[e] = true;
                    parent.insert(to, (v, e));
                    queue.push_back(to);
                }
            }
        }
    }
    let tree_edges: Vec<usize> = g.internal_edges.iter().copied().filter(|&e| in_tree[e]).collect();
    let cotree_edges: Vec<usize> = g.internal_edges.iter().copied().filter(|&e| !in_tree[e]).collect();

    let path_to_root = |mut v: usize| {
        let mut edges = Vec::new();
        while let Some(&(p, e)) = parent.get(&v) {
            edges.push(e);
            v = p;
        }
        edges
    };
    let cycles: Vec<Vec<u8>> = cotree_edges
        .iter()
        .map(|&e| {
            let mut z = vec![0u8; g.num_edges()];
            z[e] ^= 1;
            let [x, y] = g.edges[e].ends;
            for t in path_to_root(g.ends[x].vertex) {
                z[t] ^= 1;
            }
            for t in path_to_root(g.ends[y].vertex) {
                z[t] ^= 1;
            }
            z
        })
        .collect();
    let n = cycles.len();
    let mut intersection = vec![vec![0u8; n]; n];
    for i in 0..n {
        for j in 0..n {
            intersection[i][j] = cycle_intersection(g, &cycles[i], &cycles[j]);
        }
    }
    H1Basis {
        tree_edges,
        cotree_edges,
        cycles,
        intersection,
    }
}

/// Mod-2 intersection number of two cycles (0/1 edge vectors whose internal
/// vertices all have even degree).
pub fn cycle_intersection(g: &DecoratedGraph, z1: &[u8], z2: &[u8]) -> u8 {
    // For each end used by z2, the other end z2 uses at the same vertex.
    let partner = |end: usize| -> usize {
        let v = &g.vertices[g.ends[end].vertex];
        v.cyclic
            .iter()
            .copied()
            .find(|&x| x != end && z2[g.ends[x].edge] == 1)
            .expect("cycle has odd degree at a vertex")
    };
    let mut count = 0u8;
    for e in 0..g.num_edges() {
        if z1[e] == 0 || z2[e] == 0 {
            continue;
        }
        let [x, y] = g.edges[e].ends;
        let left_at_start = g.next_end(x) == partner(x);
        let left_at_end = g.next_end(y) != partner(y);
        if left_at_start != left_at_end {
            count ^= 1;
        }
    }
    count
}

/// An element of the intersection algebra `A_Γ`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AlgebraElement {
    /// Dimension of the underlying homology group.
    pub dim: usize,
    /// Coefficients of the classes `[α]`.
    pub terms: BTreeMap<RelH1Class, Complex64>,
}

impl AlgebraElement {
    /// `z·[α]`.
    pub fn monomial(dim: usize, class: RelH1Class, z: Complex64) -> Self {
        AlgebraElement {
            dim,
            terms: BTreeMap::from([(class, z)]),
        }
    }

    /// The unit `[0]`.
    pub fn one(dim: usize) -> Self {
        Self::monomial(dim, RelH1Class::ZERO, Complex64::new(1.0, 0.0))
    }

    /// Coefficient of `[α]` (zero when absent).
    pub fn coeff(&self, class: RelH1Class) -> Complex64 {
        self.terms.get(&class).copied().unwrap_or_default()
    }
}

/// Sign `⟨γ, δ⟩ = (−1)^{γ·δ}` of the product rule.
pub fn product_sign(basis: &H1Basis, a: RelH1Class, b: RelH1Class) -> f64 {
    if basis.pairing(a, b) == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Product in `A_Γ`: `[γ]·[δ] = ⟨γ,δ⟩[γ+δ]`, extended bilinearly.
pub fn algebra_mul(
    basis: &H1Basis,
    a: &AlgebraElement,
    b: &AlgebraElement,
) -> Result<AlgebraElement> {
    if a.dim != b.dim || a.dim != basis.dim() {
        return Err(Error::Mismatch(format!(
            "algebra elements over dimensions {} and {} (basis {})",
            a.dim,
            b.dim,
            basis.dim()
        )));
    }
    let mut terms: BTreeMap<RelH1Class, Complex64> = BTreeMap::new();
    for (&x, &u) in &a.terms {
        for (&y, &v) in &b.terms {
            *terms.entry(x.add(y)).or_default() += u * v * product_sign(basis, x, y);
        }
    }
    Ok(AlgebraElement { dim: a.dim, terms })
}

/// A character of `A_Γ`: a quadratic refinement `q` of the intersection form.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Character {
    /// Values `q(z_j)` on the basis classes.
    pub basis_values: Vec<u8>,
    /// The intersection matrix it refines.
    pub form: Vec<Vec<u8>>,
}

impl Character {
    /// `q(γ) = Σ x_i q_i + Σ_{i<j} x_i x_j ⟨z_i, z_j⟩ mod 2`.
    pub fn q(&self, c: RelH1Class) -> u8 {
        let n = self.basis_values.len();
        let mut s = 0u8;
        for i in 0..n {
            s ^= c.bit(i) & self.basis_values[i];
            for j in (i + 1)..n {
                s ^= c.bit(i) & c.bit(j) & self.form[i][j];
            }
        }
        s
    }

    /// `χ([γ]) = (−1)^{q(γ)}`.
    pub fn value(&self, c: RelH1Class) -> f64 {
        if self.q(c) == 0 {
            1.0
        } else {
            -1.0
        }
    }

    /// Applies the character to an algebra element.
    pub fn apply(&self, a: &AlgebraElement) -> Complex64 {
        a.terms.iter().map(|(&c, &z)| z * self.value(c)).sum()
    }

    /// The linear form `χ′/χ` as a class-indexed bit vector `λ` with
    /// `λ_i = q′(z_i) − q(z_i)`.
    pub fn ratio(&self, other: &Character) -> Vec<u8> {
        self.basis_values
            .iter()
            .zip(&other.basis_values)
            .map(|(a, b)| a ^ b)
            .collect()
    }
}

/// All `2^g` characters, each verified against the quadratic identity on
/// every pair of basis vectors.
pub fn characters(basis: &H1Basis) -> Vec<Character> {
    let n = basis.dim();
    let out: Vec<Character> = (0..(1u64 << n))
        .map(|mask| Character {
            basis_values: (0..n).map(|j| ((mask >> j) & 1) as u8).collect(),
            form: basis.intersection.clone(),
        })
        .collect();
    for chi in &out {
        for i in 0..n {
            for j in 0..n {
                let a = RelH1Class::basis(i);
                let b = RelH1Class::basis(j);
                debug_assert_eq!(
                    chi.q(a.add(b)),
                    chi.q(a) ^ chi.q(b) ^ basis.pairing(a, b)
                );
            }
        }
    }
    out
}
