//! Admissible colorings at level `r`, vertex weights and basis-vector norms.
//!
//! Colors are the shifted labels `c = (number of strands) + 1`, so a
//! decomposition curve with color `c` acts by `−2cos(πc/r)`.  A vertex with
//! colors `(a, b, c)` is admissible when
//!
//! * `a + b + c` is odd,
//! * `|a − b| < c < a + b` (strict triangle inequalities), and
//! * `a + b + c < 2r`,
//!
//! which is exactly the range where all four factorial arguments of the
//! vertex weight `⟨a, b, c⟩` are non-negative.

pub mod quantum;

pub use quantum::{quantum_factorial, quantum_int, LogReal, QTable};

use crate::error::{Error, Result};
use crate::surface::graph::{DecoratedGraph, EdgeKind};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::sync::Arc;

/// A level `r` together with the boundary colors it induces.
#[derive(Debug, Clone)]
pub struct Level {
    /// The level.
    pub r: u32,
    /// Boundary colors `ĉ_i = r·t_i`, one per marked point.
    pub boundary: Vec<u32>,
    /// Quantum tables for this level.
    pub table: Arc<QTable>,
}

impl Level {
    /// Builds the level for a graph; `r` must clear every denominator of the
    /// marked fractions and every boundary color must lie in `1..r`.
    pub fn new(g: &DecoratedGraph, r: u32) -> Result<Self> {
        if r < 3 {
            return Err(Error::Level(format!("level r = {r} is below 3")));
        }
        let mut boundary = Vec::with_capacity(g.marked.len());
        for m in &g.marked {
            let (p, q) = m.fraction;
            if r % q != 0 {
                return Err(Error::Level(format!(
                    "r = {r} is not a multiple of the denominator {q}"
                )));
            }
            let c = r / q * p;
            if c == 0 || c >= r {
                return Err(Error::Level(format!(
                    "boundary color {c} at r = {r} is outside 1..r"
                )));
            }
            boundary.push(c);
        }
        Ok(Level {
            r,
            boundary,
            table: Arc::new(QTable::new(r)),
        })
    }

    /// `ħ = 1/r`.
    pub fn hbar(&self) -> f64 {
        1.0 / self.r as f64
    }
}

/// An integer coloring of all edges (legs included) in the graph's edge order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct AdmissibleColoring {
    /// Colors `c_e ∈ {1, …, r−1}`.
    pub colors: Vec<u32>,
}

impl AdmissibleColoring {
    /// Wraps a color vector (no validation; see [`is_admissible`]).
    pub fn new(colors: Vec<u32>) -> Self {
        AdmissibleColoring { colors }
    }

    /// The realized real coloring `c/r`.
    pub fn to_real(&self, r: u32) -> RealColoring {
        RealColoring {
            tau: self.colors.iter().map(|&c| c as f64 / r as f64).collect(),
        }
    }

    /// Shifts by an integer vector, returning `None` when a color leaves
    /// `1..r`.
    pub fn shifted(&self, k: &[i32], r: u32) -> Option<AdmissibleColoring> {
        let mut out = Vec::with_capacity(self.colors.len());
        for (&c, &d) in self.colors.iter().zip(k) {
            let x = c as i64 + d as i64;
            if x < 1 || x >= r as i64 {
                return None;
            }
            out.push(x as u32);
        }
        Some(AdmissibleColoring { colors: out })
    }
}

/// A real coloring `τ: E → (0, 1)` (legs pinned to their fractions).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RealColoring {
    /// Values per edge.
    pub tau: Vec<f64>,
}

impl RealColoring {
    /// Builds a real coloring from values on the internal edges, filling legs
    /// from the marked fractions.
    pub fn from_internal(g: &DecoratedGraph, internal: &[f64]) -> Result<Self> {
        if internal.len() != g.internal_edges.len() {
            return Err(Error::Domain(format!(
                "expected {} internal values, got {}",
                g.internal_edges.len(),
                internal.len()
            )));
        }
        let mut tau = vec![0.0; g.num_edges()];
        for (&e, &t) in g.internal_edges.iter().zip(internal) {
            tau[e] = t;
        }
        for m in &g.marked {
            tau[m.edge] = m.fraction.0 as f64 / m.fraction.1 as f64;
        }
        Ok(RealColoring { tau })
    }

    /// Values on the internal edges.
    pub fn internal(&self, g: &DecoratedGraph) -> Vec<f64> {
        g.internal_edges.iter().map(|&e| self.tau[e]).collect()
    }

    /// Whether `τ` lies in the open domain `U` (strict triangle inequalities,
    /// vertex sums below 2, all values in `(0, 1)`).
    pub fn in_domain(&self, g: &DecoratedGraph) -> bool {
        self.tau.iter().all(|&t| t > 0.0 && t < 1.0)
            && g.internal_vertices().all(|v| {
                let [x, y, z] = g.vertex_edges(v);
                real_triple_ok(self.tau[x], self.tau[y], self.tau[z])
            })
    }
}

/// Strict real admissibility of a vertex triple.
pub fn real_triple_ok(a: f64, b: f64, c: f64) -> bool {
    a + b + c < 2.0 && a < b + c && b < a + c && c < a + b
}

/// Admissibility of a vertex triple of colors at level `r`.
pub fn triple_ok(a: u32, b: u32, c: u32, r: u32) -> bool {
    let s = a + b + c;
    s % 2 == 1 && a < b + c && b < a + c && c < a + b && s < 2 * r
}

/// Whether a coloring is admissible on the graph at the given level.
pub fn is_admissible(c: &AdmissibleColoring, g: &DecoratedGraph, level: &Level) -> bool {
    let r = level.r;
    if c.colors.len() != g.num_edges() || c.colors.iter().any(|&x| x == 0 || x >= r) {
        return false;
    }
    for (i, m) in g.marked.iter().enumerate() {
        if c.colors[m.edge] != level.boundary[i] {
            return false;
        }
    }
    g.internal_vertices().all(|v| {
        let [x, y, z] = g.vertex_edges(v);
        triple_ok(c.colors[x], c.colors[y], c.colors[z], r)
    })
}

/// All admissible colorings, in lexicographic order of the internal edges
/// (first internal edge varies slowest).
pub fn enumerate_colorings(g: &DecoratedGraph, level: &Level) -> Vec<AdmissibleColoring> {
    let r = level.r;
    let mut base = vec![0u32; g.num_edges()];
    for (i, m) in g.marked.iter().enumerate() {
        base[m.edge] = level.boundary[i];
    }
    let order = &g.internal_edges;
    if order.is_empty() {
        let c = AdmissibleColoring::new(base);
        return if is_admissible(&c, g, level) { vec![c] } else { vec![] };
    }
    // For each position, the vertices whose edges are all assigned once that
    // position is filled.
    let mut assigned_at = vec![usize::MAX; g.num_edges()];
    for e in 0..g.num_edges() {
        if !g.is_internal(e) {
            assigned_at[e] = 0;
        }
    }
    for (i, &e) in order.iter().enumerate() {
        assigned_at[e] = i;
    }
    let mut checks: Vec<Vec<usize>> = vec![Vec::new(); order.len()];
    for v in g.internal_vertices() {
        let last = g.vertex_edges(v).iter().map(|&e| assigned_at[e]).max().unwrap();
        checks[last].push(v);
    }

    fn recurse(
        g: &DecoratedGraph,
        order: &[usize],
        checks: &[Vec<usize>],
        pos: usize,
        cur: &mut Vec<u32>,
        r: u32,
        out: &mut Vec<AdmissibleColoring>,
    ) {
        if pos == order.len() {
            out.push(AdmissibleColoring::new(cur.clone()));
            return;
        }
        for c in 1..r {
            cur[order[pos]] = c;
            let ok = checks[pos].iter().all(|&v| {
                let [x, y, z] = g.vertex_edges(v);
                triple_ok(cur[x], cur[y], cur[z], r)
            });
            if ok {
                recurse(g, order, checks, pos + 1, cur, r, out);
            }
        }
        cur[order[pos]] = 0;
    }

    (1..r)
        .into_par_iter()
        .map(|c0| {
            let mut cur = base.clone();
            cur[order[0]] = c0;
            let mut out = Vec::new();
            let ok = checks[0].iter().all(|&v| {
                let [x, y, z] = g.vertex_edges(v);
                triple_ok(cur[x], cur[y], cur[z], r)
            });
            if ok {
                recurse(g, order, &checks, 1, &mut cur, r, &mut out);
            }
            out
        })
        .collect::<Vec<_>>()
        .concat()
}

/// `⟨a, b, c⟩`: the vertex weight
/// `⟨(a+b+c−1)/2⟩! ⟨(a+b−c−1)/2⟩! ⟨(a−b+c−1)/2⟩! ⟨(b+c−a−1)/2⟩! / (⟨a−1⟩! ⟨b−1⟩! ⟨c−1⟩!)`.
pub fn vertex_weight(a: u32, b: u32, c: u32, r: u32) -> Result<f64> {
    Ok(ln_vertex_weight(a, b, c, &QTable::new(r))?.exp())
}

/// Logarithm of the vertex weight using a prebuilt table.
pub fn ln_vertex_weight(a: u32, b: u32, c: u32, t: &QTable) -> Result<f64> {
    if !triple_ok(a, b, c, t.r()) {
        return Err(Error::Inadmissible(format!(
            "vertex triple ({a}, {b}, {c}) at r = {}",
            t.r()
        )));
    }
    let (a, b, c) = (a as i64, b as i64, c as i64);
    let num = [
        (a + b + c - 1) / 2,
        (a + b - c - 1) / 2,
        (a - b + c - 1) / 2,
        (b + c - a - 1) / 2,
    ];
    let den = [a - 1, b - 1, c - 1];
    Ok(num.iter().map(|&n| t.ln_bracket_fact(n)).sum::<f64>()
        - den.iter().map(|&n| t.ln_bracket_fact(n)).sum::<f64>())
}

/// `‖ψ_c‖² = (2/r)^{χ(Γ)/2} ∏_P ⟨c_P¹, c_P², c_P³⟩ / ∏_e ⟨c_e⟩`.
pub fn norm_sq(c: &AdmissibleColoring, g: &DecoratedGraph, level: &Level) -> Result<f64> {
    if !is_admissible(c, g, level) {
        return Err(Error::Inadmissible(format!("{:?}", c.colors)));
    }
    let t = &level.table;
    let chi = g.euler_characteristic() as f64;
    let mut ln = 0.5 * chi * (2.0 / level.r as f64).ln();
    for v in g.internal_vertices() {
        let [x, y, z] = g.vertex_edges(v);
        ln += ln_vertex_weight(c.colors[x], c.colors[y], c.colors[z], t)?;
    }
    for &ce in &c.colors {
        ln -= t.bracket(ce as i64).ln();
    }
    Ok(ln.exp())
}

/// The local (global-factor-free) squared norm of a colored piece: vertex
/// weights over the `E₂` edge brackets times the square roots of the `E₁`
/// edge brackets.
pub fn local_norm_sq(
    vertices: &[(u32, u32, u32)],
    e2_colors: &[u32],
    e1_colors: &[u32],
    r: u32,
) -> Result<f64> {
    let t = QTable::new(r);
    let mut ln = 0.0;
    for &(a, b, c) in vertices {
        ln += ln_vertex_weight(a, b, c, &t)?;
    }
    for &c in e2_colors {
        ln -= t.bracket(c as i64).ln();
    }
    for &c in e1_colors {
        ln -= 0.5 * t.bracket(c as i64).ln();
    }
    Ok(ln.exp())
}

/// Index of a coloring inside an enumeration (binary search; enumeration
/// order is lexicographic in internal-edge order).
pub fn coloring_index(
    g: &DecoratedGraph,
    list: &[AdmissibleColoring],
    c: &AdmissibleColoring,
) -> Option<usize> {
    let key = |x: &AdmissibleColoring| -> Vec<u32> {
        g.internal_edges.iter().map(|&e| x.colors[e]).collect()
    };
    let k = key(c);
    list.binary_search_by(|x| key(x).cmp(&k)).ok()
}

/// The nearest admissible coloring to `τ·r` whose internal colors differ by
/// at most `max_dist` per edge; ties go to smaller colors lexicographically.
pub fn anchor_coloring(
    g: &DecoratedGraph,
    level: &Level,
    tau: &RealColoring,
    max_dist: u32,
) -> Result<AdmissibleColoring> {
    let r = level.r;
    let mut base = vec![0u32; g.num_edges()];
    for (i, m) in g.marked.iter().enumerate() {
        base[m.edge] = level.boundary[i];
    }
    let centers: Vec<f64> = g.internal_edges.iter().map(|&e| tau.tau[e] * r as f64).collect();
    let mut best: Option<(f64, Vec<u32>)> = None;
    let span = 2 * max_dist as i64 + 1;
    let total = span.pow(g.internal_edges.len() as u32);
    for idx in 0..total {
        let mut rem = idx;
        let mut cur = base.clone();
        let mut dist = 0.0;
        let mut ok = true;
        for (i, &e) in g.internal_edges.iter().enumerate() {
            let off = rem % span - max_dist as i64;
            rem /= span;
            let x = centers[i].round() as i64 + off;
            if x < 1 || x >= r as i64 {
                ok = false;
                break;
            }
            cur[e] = x as u32;
            dist += (x as f64 - centers[i]).powi(2);
        }
        if !ok {
            continue;
        }
        let c = AdmissibleColoring::new(cur.clone());
        if !is_admissible(&c, g, level) {
            continue;
        }
        let key: Vec<u32> = g.internal_edges.iter().map(|&e| cur[e]).collect();
        let better = match &best {
            None => true,
            Some((d, k)) => {
                dist < d - 1e-12 || ((dist - d).abs() <= 1e-12 && key < *k)
            }
        };
        if better {
            best = Some((dist, key));
        }
    }
    let (_, key) = best.ok_or_else(|| {
        Error::Domain(format!(
            "no admissible coloring within {max_dist} of τ·r at r = {r}"
        ))
    })?;
    let mut cur = base;
    for (i, &e) in g.internal_edges.iter().enumerate() {
        cur[e] = key[i];
    }
    Ok(AdmissibleColoring::new(cur))
}

/// Colors of the three edges at each internal vertex, for diagnostics.
pub fn vertex_triples(g: &DecoratedGraph, c: &AdmissibleColoring) -> Vec<(u32, u32, u32)> {
    g.internal_vertices()
        .map(|v| {
            let [x, y, z] = g.vertex_edges(v);
            (c.colors[x], c.colors[y], c.colors[z])
        })
        .collect()
}

/// Whether every edge of the given kind is a loop (used by callers that need
/// to know whether parity constraints bind an edge).
pub fn is_loop(g: &DecoratedGraph, e: usize) -> bool {
    matches!(g.edges[e].kind, EdgeKind::Loop { .. })
}
