//! The sparse curve operator `T_r^γ` in the orthonormal basis `φ_c`.
//!
//! Rows are computed independently (in parallel) from the local matrix
//! elements of the library components:
//!
//! * `C_e` is diagonal with entries `−2cos(πc_e/r)`;
//! * `D_e` for a loop edge shifts `c_e` by `±1` with coefficients
//!   `W(πc_e/r, πc_f/r, ±π/r)`;
//! * `D_e` for a joining edge shifts `c_e` by `0, ±2`;
//! * `τ^m_{C_e}(D_e)` multiplies the `D_e` coefficients by the ratio of Dehn
//!   twist eigenvalues `e^{iπm((c_e+k)² − c_e²)/2r}`.
//!
//! Disjoint unions and parallel powers are operator products (the factors
//! commute).  Joining-edge coefficients are expressed in the basis
//! `φ_c · ∏_{e joining} (−1)^{⌊(c_e−1)/2⌋}`, which is the phase convention in
//! which the dual curve's off-diagonal coefficients are `−J`.

use super::recoupling::Recoupler;
use crate::coloring::{enumerate_colorings, AdmissibleColoring, Level};
use crate::curves::{ComponentKind, MulticurveSpec};
use crate::error::{Error, Result};
use crate::surface::graph::{DecoratedGraph, EdgeKind};
use crate::surface::cocycle_sign;
use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;
use sha2::{Digest, Sha256};
use std::collections::HashMap;
use std::f64::consts::PI;
use std::io::Write;
use std::sync::Arc;

/// Everything needed to assemble operators on one graph at one level.
#[derive(Debug, Clone)]
pub struct OperatorContext {
    /// The graph.
    pub graph: Arc<DecoratedGraph>,
    /// The level.
    pub level: Level,
    /// All admissible colorings, in enumeration order.
    pub colorings: Arc<Vec<AdmissibleColoring>>,
    index: Arc<ColoringIndex>,
    rc: Recoupler,
}

/// Lookup from colorings to their enumeration index: a dense mixed-radix
/// table over the internal edges when it fits, a hash map otherwise.
#[derive(Debug)]
enum ColoringIndex {
    Dense { edges: Vec<usize>, r: u64, table: Vec<u32> },
    Sparse(HashMap<Vec<u32>, usize>),
}

const DENSE_INDEX_LIMIT: u64 = 1 << 26;

impl ColoringIndex {
    fn build(g: &DecoratedGraph, r: u32, colorings: &[AdmissibleColoring]) -> Self {
        let edges = g.internal_edges.clone();
        let size = (r as u64).checked_pow(edges.len() as u32);
        match size {
            Some(n) if n <= DENSE_INDEX_LIMIT && colorings.len() < u32::MAX as usize => {
                let mut table = vec![u32::MAX; n as usize];
                for (i, c) in colorings.iter().enumerate() {
                    let key = Self::key(&edges, r as u64, &c.colors);
                    table[key] = i as u32;
                }
                ColoringIndex::Dense {
                    edges,
                    r: r as u64,
                    table,
                }
            }
            _ => ColoringIndex::Sparse(
                colorings
                    .iter()
                    .enumerate()
                    .map(|(i, c)| (c.colors.clone(), i))
                    .collect(),
            ),
        }
    }

    fn key(edges: &[usize], r: u64, colors: &[u32]) -> usize {
        edges
            .iter()
            .fold(0u64, |acc, &e| acc * r + colors[e] as u64) as usize
    }

    fn get(&self, colors: &[u32], boundary_ok: impl Fn() -> bool) -> Option<usize> {
        match self {
            ColoringIndex::Dense { edges, r, table } => {
                if edges.iter().any(|&e| colors[e] as u64 >= *r) || !boundary_ok() {
                    return None;
                }
                let i = table[Self::key(edges, *r, colors)];
                (i != u32::MAX).then_some(i as usize)
            }
            ColoringIndex::Sparse(map) => map.get(colors).copied(),
        }
    }
}

impl OperatorContext {
    /// Enumerates colorings and prepares the recoupling tables.
    pub fn new(g: &DecoratedGraph, r: u32) -> Result<Self> {
        let level = Level::new(g, r)?;
        let colorings = enumerate_colorings(g, &level);
        let index = ColoringIndex::build(g, r, &colorings);
        Ok(OperatorContext {
            graph: Arc::new(g.clone()),
            rc: Recoupler::new(level.table.clone()),
            level,
            colorings: Arc::new(colorings),
            index: Arc::new(index),
        })
    }

    /// The level `r`.
    pub fn r(&self) -> u32 {
        self.level.r
    }

    /// Dimension of `V_r`.
    pub fn dim(&self) -> usize {
        self.colorings.len()
    }

    /// Position of a coloring in the enumeration.
    pub fn index_of(&self, colors: &[u32]) -> Option<usize> {
        if colors.len() != self.graph.num_edges() {
            return None;
        }
        let g = &self.graph;
        let level = &self.level;
        self.index.get(colors, || {
            g.marked
                .iter()
                .enumerate()
                .all(|(i, m)| colors[m.edge] == level.boundary[i])
        })
    }

    /// The recoupling evaluator of this level.
    pub fn recoupler(&self) -> &Recoupler {
        &self.rc
    }
}

/// One matrix element `⟨φ_{c+k}, T φ_c⟩`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Entry {
    /// Shift vector over all edges.
    pub k: Vec<i32>,
    /// Index of the target coloring `c + k`.
    pub target: usize,
    /// The coefficient, including the cocycle sign.
    pub value: Complex64,
}

/// A sparse curve operator at one level.
#[derive(Debug, Clone, Serialize)]
pub struct CurveOperator {
    /// The level.
    pub r: u32,
    /// Human-readable curve label.
    pub curve: String,
    /// Number of connected components `n(γ)`.
    pub n_components: usize,
    /// Intersection numbers `I_e`.
    pub intersections: Vec<u32>,
    /// Row `i` lists `T φ_{c_i}` in the basis.
    pub rows: Vec<Vec<Entry>>,
    /// The sign `c̄(γ)` at every source coloring.
    pub cbar: Vec<f64>,
    /// Colorings indexing the rows.
    #[serde(skip)]
    pub colorings: Arc<Vec<AdmissibleColoring>>,
}

impl CurveOperator {
    /// Dimension.
    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    /// `F_k(c/r, 1/r)` for row `i`: the matrix element divided by `c̄`.
    pub fn coefficient(&self, i: usize, k: &[i32]) -> Complex64 {
        self.rows[i]
            .iter()
            .find(|e| e.k == k)
            .map(|e| e.value * self.cbar[i])
            .unwrap_or_default()
    }

    /// Number of stored nonzero entries.
    pub fn nnz(&self) -> usize {
        self.rows.iter().map(|r| r.len()).sum()
    }

    /// Dense matrix `M[target, source]` (for small dimensions).
    pub fn to_dense(&self) -> DMatrix<Complex64> {
        let n = self.dim();
        let mut m = DMatrix::zeros(n, n);
        for (i, row) in self.rows.iter().enumerate() {
            for e in row {
                m[(e.target, i)] += e.value;
            }
        }
        m
    }

    /// Largest `|F_k|` over all rows.
    pub fn max_coefficient(&self) -> f64 {
        self.rows
            .iter()
            .flat_map(|r| r.iter().map(|e| e.value.norm()))
            .fold(0.0, f64::max)
    }

    /// Largest deviation from `F_{−k}(c+k) = conj F_k(c)`, relative to the
    /// largest coefficient.
    pub fn hermiticity_defect(&self) -> f64 {
        let scale = self.max_coefficient().max(1e-300);
        let mut worst: f64 = 0.0;
        for (i, row) in self.rows.iter().enumerate() {
            for e in row {
                let back: Vec<i32> = e.k.iter().map(|x| -x).collect();
                let partner = self.rows[e.target]
                    .iter()
                    .find(|x| x.k == back && x.target == i)
                    .map(|x| x.value)
                    .unwrap_or_default();
                worst = worst.max((partner - e.value.conj()).norm() / scale);
            }
        }
        worst
    }

    /// Whether every stored shift satisfies `|k_e| ≤ I_e` and
    /// `k_e ≡ I_e (mod 2)`; returns the first violation.
    pub fn support_violation(&self) -> Option<(usize, Vec<i32>)> {
        for (i, row) in self.rows.iter().enumerate() {
            for e in row {
                let bad = e.k.iter().zip(&self.intersections).any(|(&k, &ie)| {
                    k.unsigned_abs() > ie || (k - ie as i32).rem_euclid(2) != 0
                });
                if bad {
                    return Some((i, e.k.clone()));
                }
            }
        }
        None
    }

    /// Operator 2-norm, computed per connected block of the sparsity graph:
    /// Sturm bisection for Hermitian chains, dense eigenvalues otherwise.
    pub fn spectral_norm(&self) -> Result<f64> {
        let blocks = self.blocks();
        let hermitian = self.hermiticity_defect() < 1e-10;
        let norms: Vec<Result<f64>> = blocks
            .par_iter()
            .map(|b| self.block_norm(b, hermitian))
            .collect();
        let mut best: f64 = 0.0;
        for n in norms {
            best = best.max(n?);
        }
        Ok(best)
    }

    fn blocks(&self) -> Vec<Vec<usize>> {
        let n = self.dim();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for (i, row) in self.rows.iter().enumerate() {
            for e in row {
                let (a, b) = (find(&mut parent, i), find(&mut parent, e.target));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
        let mut groups: HashMap<usize, Vec<usize>> = HashMap::new();
        for i in 0..n {
            let root = find(&mut parent, i);
            groups.entry(root).or_default().push(i);
        }
        let mut out: Vec<Vec<usize>> = groups.into_values().collect();
        out.sort();
        out
    }

    fn block_norm(&self, block: &[usize], hermitian: bool) -> Result<f64> {
        if hermitian {
            if let Some((diag, off)) = self.as_chain(block) {
                return Ok(sturm_norm(&diag, &off));
            }
        }
        if block.len() > 3000 {
            return Err(Error::Capability(format!(
                "spectral norm of a {}-dimensional non-chain block",
                block.len()
            )));
        }
        let pos: HashMap<usize, usize> = block.iter().enumerate().map(|(p, &i)| (i, p)).collect();
        let n = block.len();
        let mut m = DMatrix::<Complex64>::zeros(n, n);
        for (p, &i) in block.iter().enumerate() {
            for e in &self.rows[i] {
                m[(pos[&e.target], p)] += e.value;
            }
        }
        // Real symmetric embedding of the Hermitian matrix M†M.
        let h = m.adjoint() * &m;
        let mut big = DMatrix::<f64>::zeros(2 * n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                let z = h[(i, j)];
                big[(i, j)] = z.re;
                big[(i + n, j + n)] = z.re;
                big[(i, j + n)] = -z.im;
                big[(i + n, j)] = z.im;
            }
        }
        let ev = SymmetricEigen::new(big).eigenvalues;
        let top = ev.iter().cloned().fold(0.0, f64::max);
        Ok(top.max(0.0).sqrt())
    }

    /// If the block is a path (each row touches at most two others, forming
    /// a chain), returns its diagonal and the moduli of its off-diagonal.
    fn as_chain(&self, block: &[usize]) -> Option<(Vec<f64>, Vec<f64>)> {
        let n = block.len();
        if n == 1 {
            let i = block[0];
            let d = self.rows[i]
                .iter()
                .filter(|e| e.target == i)
                .map(|e| e.value.re)
                .sum();
            return Some((vec![d], vec![]));
        }
        let mut nbr: HashMap<usize, Vec<usize>> = HashMap::new();
        for &i in block {
            let mut list: Vec<usize> = self.rows[i]
                .iter()
                .filter(|e| e.target != i)
                .map(|e| e.target)
                .collect();
            list.sort();
            list.dedup();
            if list.len() > 2 {
                return None;
            }
            nbr.insert(i, list);
        }
        let start = *block.iter().find(|i| nbr[i].len() == 1)?;
        let mut order = vec![start];
        let mut prev = usize::MAX;
        let mut cur = start;
        while order.len() < n {
            let next = *nbr[&cur].iter().find(|&&x| x != prev)?;
            prev = cur;
            cur = next;
            order.push(cur);
        }
        let val = |from: usize, to: usize| -> Complex64 {
            self.rows[from]
                .iter()
                .filter(|e| e.target == to)
                .map(|e| e.value)
                .sum()
        };
        let diag = order.iter().map(|&i| val(i, i).re).collect();
        let off = order.windows(2).map(|w| val(w[0], w[1]).norm()).collect();
        Some((diag, off))
    }

    /// Writes the operator as JSON: a manifest and `(c_index, k, re, im)`
    /// triplets.
    pub fn write_json<W: Write>(&self, g: &DecoratedGraph, mut w: W) -> Result<()> {
        serde_json::to_writer_pretty(&mut w, &self.export(g))?;
        writeln!(w)?;
        Ok(())
    }

    /// Writes the triplets as CSV with columns `c_index,k,re,im` (the shift
    /// vector is `;`-separated in edge order).
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut wr = csv::Writer::from_writer(w);
        wr.write_record(["c_index", "k", "re", "im"])?;
        for (i, row) in self.rows.iter().enumerate() {
            for e in row {
                let k: Vec<String> = e.k.iter().map(|x| x.to_string()).collect();
                wr.write_record([
                    i.to_string(),
                    k.join(";"),
                    format!("{:.17e}", e.value.re),
                    format!("{:.17e}", e.value.im),
                ])?;
            }
        }
        wr.flush()?;
        Ok(())
    }

    /// Structured export (manifest plus triplets).
    pub fn export(&self, g: &DecoratedGraph) -> OperatorExport {
        OperatorExport {
            manifest: Manifest {
                r: self.r,
                curve: self.curve.clone(),
                graph_hash: graph_hash(g),
                dimension: self.dim(),
                colorings: self.colorings.iter().map(|c| c.colors.clone()).collect(),
            },
            entries: self
                .rows
                .iter()
                .enumerate()
                .flat_map(|(i, row)| {
                    row.iter().map(move |e| Triplet {
                        c_index: i,
                        k: e.k.clone(),
                        re: e.value.re,
                        im: e.value.im,
                    })
                })
                .collect(),
        }
    }
}

/// Operator manifest.
#[derive(Debug, Clone, Serialize)]
pub struct Manifest {
    /// Level.
    pub r: u32,
    /// Curve label.
    pub curve: String,
    /// SHA-256 of the canonical graph serialization.
    pub graph_hash: String,
    /// Number of basis vectors.
    pub dimension: usize,
    /// Colorings in row order.
    pub colorings: Vec<Vec<u32>>,
}

/// One exported matrix element.
#[derive(Debug, Clone, Serialize)]
pub struct Triplet {
    /// Source coloring index.
    pub c_index: usize,
    /// Shift vector.
    pub k: Vec<i32>,
    /// Real part.
    pub re: f64,
    /// Imaginary part.
    pub im: f64,
}

/// Exported operator.
#[derive(Debug, Clone, Serialize)]
pub struct OperatorExport {
    /// Manifest.
    pub manifest: Manifest,
    /// Matrix elements.
    pub entries: Vec<Triplet>,
}

/// Stable hash of a graph (hex SHA-256 of its JSON serialization).
pub fn graph_hash(g: &DecoratedGraph) -> String {
    let bytes = serde_json::to_vec(g).expect("graph serializes");
    let digest = Sha256::digest(&bytes);
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

/// Largest `|λ|` of a real symmetric tridiagonal matrix by Sturm-sequence
/// bisection.
pub fn sturm_norm(diag: &[f64], off: &[f64]) -> f64 {
    let n = diag.len();
    let bound = (0..n)
        .map(|i| {
            let l = if i > 0 { off[i - 1] } else { 0.0 };
            let r = if i + 1 < n { off[i] } else { 0.0 };
            diag[i].abs() + l + r
        })
        .fold(0.0, f64::max);
    // Number of eigenvalues strictly below x.
    let count_below = |x: f64| -> usize {
        let mut count = 0;
        let mut q = diag[0] - x;
        if q < 0.0 {
            count += 1;
        }
        for i in 1..n {
            let denom = if q == 0.0 { f64::EPSILON * (off[i - 1].abs() + 1e-300) } else { q };
            q = diag[i] - x - off[i - 1] * off[i - 1] / denom;
            if q < 0.0 {
                count += 1;
            }
        }
        count
    };
    let bisect = |target: usize| -> f64 {
        // Smallest x with count_below(x) > target, i.e. the (target)-th eigenvalue.
        let (mut lo, mut hi) = (-bound - 1.0, bound + 1.0);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if count_below(mid) > target {
                hi = mid;
            } else {
                lo = mid;
            }
            if hi - lo <= 1e-15 * (1.0 + bound) {
                break;
            }
        }
        0.5 * (lo + hi)
    };
    let lmin = bisect(0);
    let lmax = bisect(n - 1);
    lmin.abs().max(lmax.abs())
}

/// Basis phase exponent `⌊(c − 1)/2⌋` of a joining edge.
fn phase_exp(c: i64) -> i64 {
    (c - 1).div_euclid(2)
}

/// Row of one library component at source coloring `c`: `(k_e, value)`
/// pairs for the single edge the component shifts (diagonal for `C_e`).
pub(crate) fn component_row(
    g: &DecoratedGraph,
    rc: &Recoupler,
    comp: &ComponentKind,
    c: &AdmissibleColoring,
) -> Result<(usize, Vec<(i32, Complex64)>)> {
    let r = rc.r() as f64;
    match *comp {
        ComponentKind::Decomposition(e) => {
            let v = -2.0 * (PI * c.colors[e] as f64 / r).cos();
            Ok((e, vec![(0, Complex64::new(v, 0.0))]))
        }
        ComponentKind::Dual { edge: e, twist } => {
            let ce = c.colors[e] as i64;
            let twist_phase = |k: i64| {
                let x = PI * twist as f64 * (((ce + k) * (ce + k) - ce * ce) as f64) / (2.0 * r);
                Complex64::from_polar(1.0, x)
            };
            let mut out = Vec::new();
            match g.edges[e].kind {
                EdgeKind::Loop { .. } => {
                    let f = g.loop_partner(e)?;
                    let cf = c.colors[f] as i64;
                    for eps in [-1i64, 1] {
                        let v = rc.loop_element(ce - 1, cf - 1, eps);
                        if v != 0.0 {
                            out.push((eps as i32, twist_phase(eps) * v));
                        }
                    }
                }
                EdgeKind::Joining { .. } => {
                    let [a, b, cc, d] = g.joining_neighbours(e)?;
                    let s = |x: usize| c.colors[x] as i64 - 1;
                    for (ep, v) in rc.joining_row(s(a), s(b), s(cc), s(d), ce - 1) {
                        let k = ep - (ce - 1);
                        let flip = phase_exp(ce + k) - phase_exp(ce);
                        let sign = if flip.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
                        out.push((k as i32, twist_phase(k) * (sign * v)));
                    }
                }
                EdgeKind::Leg { .. } => {
                    return Err(Error::Curve(format!("dual curve of leg {}", g.edges[e].id)))
                }
            }
            Ok((e, out))
        }
    }
}

/// Operator of a single library component.
fn component_operator(ctx: &OperatorContext, comp: &ComponentKind) -> Result<Vec<Vec<Entry>>> {
    let ne = ctx.graph.num_edges();
    ctx.colorings
        .par_iter()
        .map(|c| {
            let (e, row) = component_row(&ctx.graph, &ctx.rc, comp, c)?;
            let mut entries = Vec::with_capacity(row.len());
            for (k, v) in row {
                let mut target = c.colors.clone();
                let t = target[e] as i64 + k as i64;
                if t < 1 {
                    continue;
                }
                target[e] = t as u32;
                if let Some(idx) = ctx.index_of(&target) {
                    let mut kv = vec![0i32; ne];
                    kv[e] = k;
                    entries.push(Entry {
                        k: kv,
                        target: idx,
                        value: v,
                    });
                }
            }
            entries.sort_by(|a, b| a.k.cmp(&b.k));
            Ok(entries)
        })
        .collect()
}

/// Sparse product `A·B` (apply `B` first).
pub fn compose(a: &CurveOperator, b: &CurveOperator) -> Result<CurveOperator> {
    if a.dim() != b.dim() || a.r != b.r || a.intersections.len() != b.intersections.len() {
        return Err(Error::Mismatch(format!(
            "operators of dimensions {} and {} at levels {} and {}",
            a.dim(),
            b.dim(),
            a.r,
            b.r
        )));
    }
    let rows = compose_rows(&a.rows, &b.rows);
    Ok(CurveOperator {
        r: a.r,
        curve: format!("{}·{}", a.curve, b.curve),
        n_components: a.n_components + b.n_components,
        intersections: a
            .intersections
            .iter()
            .zip(&b.intersections)
            .map(|(x, y)| x + y)
            .collect(),
        cbar: a.cbar.iter().zip(&b.cbar).map(|(x, y)| x * y).collect(),
        rows,
        colorings: a.colorings.clone(),
    })
}

fn compose_rows(a: &[Vec<Entry>], b: &[Vec<Entry>]) -> Vec<Vec<Entry>> {
    b.par_iter()
        .map(|brow| {
            let mut acc: Vec<Entry> = Vec::new();
            for eb in brow {
                for ea in &a[eb.target] {
                    let k: Vec<i32> = eb.k.iter().zip(&ea.k).map(|(x, y)| x + y).collect();
                    let v = eb.value * ea.value;
                    match acc.iter_mut().find(|x| x.k == k) {
                        Some(x) => x.value += v,
                        None => acc.push(Entry {
                            k,
                            target: ea.target,
                            value: v,
                        }),
                    }
                }
            }
            acc.retain(|e| e.value.norm() > 0.0);
            acc.sort_by(|x, y| x.k.cmp(&y.k));
            acc
        })
        .collect()
}

/// Assembles `T_r^γ` for a library multicurve.
pub fn assemble_operator(ctx: &OperatorContext, gamma: &MulticurveSpec) -> Result<CurveOperator> {
    if gamma.components.is_empty() {
        return Err(Error::Capability(
            "raw Dehn data that is not a library curve has no operator".into(),
        ));
    }
    let g = &ctx.graph;
    let mut rows: Option<Vec<Vec<Entry>>> = None;
    for comp in &gamma.components {
        let next = component_operator(ctx, comp)?;
        rows = Some(match rows {
            None => next,
            Some(prev) => compose_rows(&next, &prev),
        });
    }
    let cbar: Vec<f64> = ctx
        .colorings
        .iter()
        .map(|c| cocycle_sign(c, gamma))
        .collect::<Result<_>>()?;
    let mut rows = rows.unwrap_or_default();
    for (row, &s) in rows.iter_mut().zip(&cbar) {
        for e in row.iter_mut() {
            e.value *= s;
        }
    }
    Ok(CurveOperator {
        r: ctx.r(),
        curve: gamma.label(g),
        n_components: gamma.n_components,
        intersections: gamma.intersections.clone(),
        rows,
        cbar,
        colorings: ctx.colorings.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sturm_matches_dense() {
        let diag = [0.3, -1.2, 0.7, 2.0, -0.4];
        let off = [0.5, 1.1, -0.2, 0.9];
        let n = diag.len();
        let mut m = DMatrix::<f64>::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = diag[i];
            if i + 1 < n {
                m[(i, i + 1)] = off[i];
                m[(i + 1, i)] = off[i];
            }
        }
        let ev = SymmetricEigen::new(m).eigenvalues;
        let want = ev.iter().map(|x| x.abs()).fold(0.0, f64::max);
        let offabs: Vec<f64> = off.iter().map(|x: &f64| x.abs()).collect();
        assert!((sturm_norm(&diag, &offabs) - want).abs() < 1e-12);
    }
}
