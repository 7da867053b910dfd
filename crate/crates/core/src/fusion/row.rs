//! Single rows of `T_r^γ` without enumerating the whole basis.
//!
//! Symbols are read from one row per anchor coloring, and extrapolation
//! needs levels in the thousands, where the genus-2 basis has hundreds of
//! millions of vectors.  A [`LevelContext`] holds only the recoupling tables
//! of one level; [`LevelContext::row`] applies the library components one
//! after the other to a single basis vector.

use super::operator::component_row;
use super::recoupling::Recoupler;
use crate::coloring::{is_admissible, AdmissibleColoring, Level};
use crate::curves::MulticurveSpec;
use crate::error::{Error, Result};
use crate::surface::cocycle_sign;
use crate::surface::graph::DecoratedGraph;
use num_complex::Complex64;
use serde::Serialize;
use std::sync::Arc;

/// The level-dependent tables needed to evaluate operator rows.
#[derive(Debug, Clone)]
pub struct LevelContext {
    /// The graph.
    pub graph: Arc<DecoratedGraph>,
    /// The level.
    pub level: Level,
    rc: Recoupler,
}

/// The Fourier data `k ↦ F_k(c/r, 1/r)` of one operator row.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OperatorRow {
    /// The level.
    pub r: u32,
    /// The source coloring `c`.
    pub source: Vec<u32>,
    /// `(k, F_k)` pairs sorted by `k`, without the sign `c̄`.
    pub coefficients: Vec<(Vec<i32>, Complex64)>,
    /// The sign `c̄(γ)` at `c`.
    pub cbar: f64,
}

impl OperatorRow {
    /// `F_k`, zero when `k` is not in the row.
    pub fn coefficient(&self, k: &[i32]) -> Complex64 {
        self.coefficients
            .iter()
            .find(|(x, _)| x.as_slice() == k)
            .map(|(_, v)| *v)
            .unwrap_or_default()
    }
}

impl LevelContext {
    /// Prepares the tables of level `r` on `g`.
    pub fn new(g: &DecoratedGraph, r: u32) -> Result<Self> {
        let level = Level::new(g, r)?;
        Ok(LevelContext {
            graph: Arc::new(g.clone()),
            rc: Recoupler::new(level.table.clone()),
            level,
        })
    }

    /// The level `r`.
    pub fn r(&self) -> u32 {
        self.level.r
    }

    /// Whether `colors` is an admissible coloring at this level.
    pub fn admissible(&self, colors: &[u32]) -> bool {
        is_admissible(&AdmissibleColoring::new(colors.to_vec()), &self.graph, &self.level)
    }

    /// The row `T_r^γ φ_c`, as Fourier data.
    pub fn row(&self, gamma: &MulticurveSpec, colors: &[u32]) -> Result<OperatorRow> {
        if gamma.components.is_empty() {
            return Err(Error::Capability(
                "raw Dehn data that is not a library curve has no operator".into(),
            ));
        }
        let source = AdmissibleColoring::new(colors.to_vec());
        if !is_admissible(&source, &self.graph, &self.level) {
            return Err(Error::Inadmissible(format!(
                "coloring {colors:?} at r = {}",
                self.r()
            )));
        }
        let ne = self.graph.num_edges();
        let mut states: Vec<(Vec<u32>, Vec<i32>, Complex64)> =
            vec![(colors.to_vec(), vec![0; ne], Complex64::new(1.0, 0.0))];
        for comp in &gamma.components {
            let mut next: Vec<(Vec<u32>, Vec<i32>, Complex64)> = Vec::new();
            for (cur, k, z) in &states {
                let (e, entries) =
                    component_row(&self.graph, &self.rc, comp, &AdmissibleColoring::new(cur.clone()))?;
                for (dk, v) in entries {
                    let t = cur[e] as i64 + dk as i64;
                    if t < 1 {
                        continue;
                    }
                    let mut target = cur.clone();
                    target[e] = t as u32;
                    if !self.admissible(&target) {
                        continue;
                    }
                    let mut kk = k.clone();
                    kk[e] += dk;
                    let val = *z * v;
                    match next.iter_mut().find(|(_, x, _)| *x == kk) {
                        Some(slot) => slot.2 += val,
                        None => next.push((target, kk, val)),
                    }
                }
            }
            states = next;
        }
        let mut coefficients: Vec<(Vec<i32>, Complex64)> = states
            .into_iter()
            .filter(|(_, _, z)| z.norm() > 0.0)
            .map(|(_, k, z)| (k, z))
            .collect();
        coefficients.sort_by(|a, b| a.0.cmp(&b.0));
        Ok(OperatorRow {
            r: self.r(),
            source: colors.to_vec(),
            coefficients,
            cbar: cocycle_sign(&source, gamma)?,
        })
    }
}
