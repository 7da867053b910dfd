//! ψ-symbols: Fourier data of curve operators, their extrapolation to
//! `ħ = 0`, the first-order term `Δ_γ`, the default `D_γ`, and composite
//! symbols of operator products.
//!
//! A row of `T_r^γ` at an anchor coloring `c ≈ τ·r` gives the coefficients
//! `F_k(c/r, 1/r)` of the symbol
//! `σ^γ(τ, θ, ħ) = Σ_k F_k(τ, ħ) e^{ik·θ} [p_*(γ)]`.  Sampling the same `τ`
//! at several levels and fitting a polynomial in `ħ = 1/r` per `k` yields
//! the principal part `F⁰_k(τ)` and the first-order part `F¹_k(τ)`.  The
//! `τ`-derivatives needed for `Δ_γ` are read from rows at the neighbouring
//! colorings `c ± 2δ_e`, `c ± 4δ_e`, which keep all parities.
//!
//! Shift vectors `k` are indexed by the internal edges of the graph, in the
//! order of [`DecoratedGraph::internal_edges`]; legs never shift.

pub mod fit;

pub use fit::{fit_polynomial, loglog_slope, PolyFit};

use crate::coloring::{anchor_coloring, AdmissibleColoring, Level, RealColoring};
use crate::curves::MulticurveSpec;
use crate::error::{Error, Result};
use crate::fusion::{compose, CurveOperator, LevelContext, OperatorRow};
use crate::surface::graph::DecoratedGraph;
use crate::surface::homology::{rel_h1_basis, Character, RelH1Class};
use crate::surface::{intersection_sign, project_class};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;
use std::collections::BTreeMap;
use std::io::Write;
use std::sync::Arc;

/// Residuals below this are treated as exact zeros when fitting slopes.
pub const EXACT_RESIDUAL: f64 = 1e-11;

/// Largest per-edge distance between `τ·r` and an anchor coloring.
pub const ANCHOR_RADIUS: u32 = 2;

type Fourier = BTreeMap<Vec<i32>, Complex64>;

/// One Fourier coefficient of a sampled symbol.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Term {
    /// Shift vector over the internal edges.
    pub k: Vec<i32>,
    /// `F_k(c/r, 1/r)`.
    pub value: Complex64,
    /// `∂F_k/∂τ_e` at fixed `ħ`, per internal edge; empty when the
    /// difference stencil leaves the admissible domain.
    pub gradient: Vec<Complex64>,
}

/// The Fourier data of one operator row at one level.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SymbolSample {
    /// The level.
    pub r: u32,
    /// `ħ = 1/r`.
    pub hbar: f64,
    /// The anchor coloring `c` over all edges.
    pub anchor: Vec<u32>,
    /// The realized actions `c/r` over the internal edges.
    pub tau: Vec<f64>,
    /// Coefficients sorted by `k`.
    pub terms: Vec<Term>,
    /// The sign `c̄(γ)` at the anchor.
    pub cbar: f64,
}

impl SymbolSample {
    /// `F_k`, zero when `k` is absent.
    pub fn value(&self, k: &[i32]) -> Complex64 {
        self.terms
            .iter()
            .find(|t| t.k == k)
            .map(|t| t.value)
            .unwrap_or_default()
    }

    /// Whether every term carries a `τ`-gradient.
    pub fn has_gradient(&self) -> bool {
        self.terms.iter().all(|t| !t.gradient.is_empty())
    }

    /// `Σ_k F_k e^{ik·θ}` (the symbol without its homology class).
    pub fn evaluate(&self, theta: &[f64]) -> Complex64 {
        fourier_sum(self.terms.iter().map(|t| (&t.k, t.value)), theta)
    }
}

fn fourier_sum<'a>(terms: impl Iterator<Item = (&'a Vec<i32>, Complex64)>, theta: &[f64]) -> Complex64 {
    terms
        .map(|(k, v)| {
            let phase: f64 = k.iter().zip(theta).map(|(&ki, &t)| ki as f64 * t).sum();
            v * Complex64::from_polar(1.0, phase)
        })
        .sum()
}

/// Samples of the ψ-symbol of one multicurve at a fixed target `τ`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PsiSymbol {
    /// Curve label.
    pub curve: String,
    /// The class `[p_*(γ)]`.
    pub class: RelH1Class,
    /// Number of components `n(γ)`.
    pub n_components: usize,
    /// Intersection numbers `I_e` over the internal edges.
    pub intersections: Vec<u32>,
    /// The target actions over the internal edges.
    pub tau: Vec<f64>,
    /// Samples in increasing level order.
    pub samples: Vec<SymbolSample>,
}

impl PsiSymbol {
    /// Collects samples of `γ` targeting the actions `tau`.
    pub fn new(
        g: &DecoratedGraph,
        gamma: &MulticurveSpec,
        tau: &[f64],
        mut samples: Vec<SymbolSample>,
    ) -> Self {
        samples.sort_by_key(|s| s.r);
        PsiSymbol {
            curve: gamma.label(g),
            class: project_class(g, &rel_h1_basis(g), gamma),
            n_components: gamma.n_components,
            intersections: g.internal_edges.iter().map(|&e| gamma.intersections[e]).collect(),
            tau: tau.to_vec(),
            samples,
        }
    }

    /// The bound `∏_e (2I_e + 1)` on the number of Fourier terms.
    pub fn max_terms(&self) -> usize {
        self.intersections.iter().map(|&i| 2 * i as usize + 1).product()
    }

    /// The component `σ_χ = χ([p_*γ]) Σ_k F_k e^{ik·θ}` of sample `i`.
    pub fn component(&self, chi: &Character, i: usize, theta: &[f64]) -> Complex64 {
        self.samples[i].evaluate(theta) * chi.value(self.class)
    }
}

fn internal_fourier(g: &DecoratedGraph, coefficients: &[(Vec<i32>, Complex64)]) -> Result<Fourier> {
    let mut out = Fourier::new();
    for (k, v) in coefficients {
        if g.marked.iter().any(|m| k[m.edge] != 0) {
            return Err(Error::Curve("a shift vector moves a leg color".into()));
        }
        let ki: Vec<i32> = g.internal_edges.iter().map(|&e| k[e]).collect();
        *out.entry(ki).or_default() += *v;
    }
    Ok(out)
}

fn shifted(colors: &[u32], e: usize, d: i64) -> Option<Vec<u32>> {
    let x = colors[e] as i64 + d;
    (x >= 1).then(|| {
        let mut c = colors.to_vec();
        c[e] = x as u32;
        c
    })
}

/// Builds a sample from the row at `anchor`, reading the `τ`-gradient from
/// rows at `anchor ± 2δ_e` (and `± 4δ_e` when admissible).
fn sample_at(
    g: &DecoratedGraph,
    r: u32,
    anchor: Vec<u32>,
    admissible: impl Fn(&[u32]) -> bool,
    row: impl Fn(&[u32]) -> Result<(Fourier, f64)>,
) -> Result<SymbolSample> {
    let (center, cbar) = row(&anchor)?;
    let n = g.internal_edges.len();
    let step = 2.0 / r as f64;
    let mut grads: Option<Vec<Fourier>> = Some(Vec::with_capacity(n));
    for &e in &g.internal_edges {
        let at = |d: i64| -> Result<Option<Fourier>> {
            match shifted(&anchor, e, d) {
                Some(c) if admissible(&c) => Ok(Some(row(&c)?.0)),
                _ => Ok(None),
            }
        };
        let (p2, m2) = (at(2)?, at(-2)?);
        let (Some(p2), Some(m2)) = (p2, m2) else {
            grads = None;
            break;
        };
        let (p4, m4) = (at(4)?, at(-4)?);
        let get = |f: &Fourier, k: &Vec<i32>| f.get(k).copied().unwrap_or_default();
        let d: Fourier = center
            .keys()
            .map(|k| {
                let v = match (&p4, &m4) {
                    (Some(p4), Some(m4)) => {
                        (-get(p4, k) + 8.0 * get(&p2, k) - 8.0 * get(&m2, k) + get(m4, k))
                            / (12.0 * step)
                    }
                    _ => (get(&p2, k) - get(&m2, k)) / (2.0 * step),
                };
                (k.clone(), v)
            })
            .collect();
        if let Some(gs) = grads.as_mut() {
            gs.push(d);
        }
    }
    let terms = center
        .iter()
        .map(|(k, &value)| Term {
            k: k.clone(),
            value,
            gradient: grads
                .as_ref()
                .map(|gs| gs.iter().map(|d| d[k]).collect())
                .unwrap_or_default(),
        })
        .collect();
    Ok(SymbolSample {
        r,
        hbar: 1.0 / r as f64,
        tau: g
            .internal_edges
            .iter()
            .map(|&e| anchor[e] as f64 / r as f64)
            .collect(),
        anchor,
        terms,
        cbar,
    })
}

/// Reads the symbol sample of an assembled operator at the anchor nearest to
/// `tau`, with the gradient taken from the neighbouring rows.
pub fn symbol_from_operator(
    op: &CurveOperator,
    g: &DecoratedGraph,
    tau: &RealColoring,
) -> Result<SymbolSample> {
    let level = Level::new(g, op.r)?;
    let anchor = anchor_coloring(g, &level, tau, ANCHOR_RADIUS)?;
    let position = |c: &[u32]| op.colorings.iter().position(|x| x.colors == c);
    let row = |c: &[u32]| -> Result<(Fourier, f64)> {
        let i = position(c).ok_or_else(|| {
            Error::Mismatch(format!("coloring {c:?} is not in the operator's basis"))
        })?;
        let s = op.cbar[i];
        let coeffs: Vec<(Vec<i32>, Complex64)> =
            op.rows[i].iter().map(|e| (e.k.clone(), e.value * s)).collect();
        Ok((internal_fourier(g, &coeffs)?, s))
    };
    sample_at(g, op.r, anchor.colors, |c| position(c).is_some(), row)
}

/// Samples the symbol of one library multicurve from single operator rows,
/// without enumerating the basis.
#[derive(Debug, Clone)]
pub struct SymbolSampler {
    graph: Arc<DecoratedGraph>,
    gamma: MulticurveSpec,
}

impl SymbolSampler {
    /// Sampler for `γ` on `g`.
    pub fn new(g: &DecoratedGraph, gamma: &MulticurveSpec) -> Self {
        SymbolSampler {
            graph: Arc::new(g.clone()),
            gamma: gamma.clone(),
        }
    }

    /// The sample at level `r` anchored near the internal actions `tau`.
    pub fn sample(&self, r: u32, tau: &[f64]) -> Result<SymbolSample> {
        let ctx = LevelContext::new(&self.graph, r)?;
        self.sample_in(&ctx, tau)
    }

    /// As [`SymbolSampler::sample`], reusing prepared level tables.
    pub fn sample_in(&self, ctx: &LevelContext, tau: &[f64]) -> Result<SymbolSample> {
        let g = &self.graph;
        let real = RealColoring::from_internal(g, tau)?;
        let anchor = anchor_coloring(g, &ctx.level, &real, ANCHOR_RADIUS)?;
        self.sample_at_coloring(ctx, anchor.colors)
    }

    /// The sample at an explicit anchor coloring.
    pub fn sample_at_coloring(&self, ctx: &LevelContext, anchor: Vec<u32>) -> Result<SymbolSample> {
        let g = &self.graph;
        let row = |c: &[u32]| -> Result<(Fourier, f64)> {
            let row: OperatorRow = ctx.row(&self.gamma, c)?;
            Ok((internal_fourier(g, &row.coefficients)?, row.cbar))
        };
        sample_at(g, ctx.r(), anchor, |c| ctx.admissible(c), row)
    }

    /// Samples at every level (concurrently) and collects the symbol.
    pub fn sweep(&self, levels: &[u32], tau: &[f64]) -> Result<PsiSymbol> {
        let samples = levels
            .par_iter()
            .map(|&r| self.sample(r, tau))
            .collect::<Result<Vec<_>>>()?;
        Ok(PsiSymbol::new(&self.graph, &self.gamma, tau, samples))
    }
}

/// The fit of one Fourier coefficient.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KFit {
    /// Shift vector.
    pub k: Vec<i32>,
    /// `F⁰_k(τ)`.
    pub f0: Complex64,
    /// `F¹_k(τ)`.
    pub f1: Complex64,
    /// Uncertainty of `F¹_k`: the larger of the least-squares standard error
    /// and the change under one more polynomial order.
    pub f1_uncertainty: f64,
    /// `∂F⁰_k/∂τ_e` per internal edge (empty without gradients).
    pub df0: Vec<Complex64>,
    /// Uncertainties of `df0`, defined like `f1_uncertainty`.
    pub df0_uncertainty: Vec<f64>,
    /// Root-mean-square residual of the fit.
    pub residual: f64,
    /// Log–log slope of `|F_k − F⁰_k − ħF¹_k|` against `ħ`; `None` when
    /// the remainder is below [`EXACT_RESIDUAL`] throughout.
    pub slope: Option<f64>,
}

/// Extrapolation of a sampled symbol to `ħ = 0`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AsymptoticFit {
    /// Curve label.
    pub curve: String,
    /// The class `[p_*(γ)]`.
    pub class: RelH1Class,
    /// Target actions.
    pub tau: Vec<f64>,
    /// Levels used.
    pub levels: Vec<u32>,
    /// Polynomial degree of the model (1, or 2 with the nuisance term).
    pub degree: usize,
    /// Condition number of the design matrix.
    pub condition: f64,
    /// Largest `|c/r − τ|` over samples and edges (compensated by Taylor
    /// transport).
    pub max_drift: f64,
    /// Per-coefficient fits, sorted by `k`.
    pub terms: Vec<KFit>,
}

impl AsymptoticFit {
    /// `F⁰_k`, zero when absent.
    pub fn f0(&self, k: &[i32]) -> Complex64 {
        self.terms
            .iter()
            .find(|t| t.k == k)
            .map(|t| t.f0)
            .unwrap_or_default()
    }

    /// The principal symbol `Σ_k F⁰_k e^{ik·θ}` (class omitted).
    pub fn principal(&self, theta: &[f64]) -> Complex64 {
        fourier_sum(self.terms.iter().map(|t| (&t.k, t.f0)), theta)
    }

    /// The principal component `σ_χ(τ, θ, 0) = χ([p_*γ]) Σ_k F⁰_k e^{ik·θ}`.
    pub fn principal_component(&self, chi: &Character, theta: &[f64]) -> Complex64 {
        self.principal(theta) * chi.value(self.class)
    }

    /// The extracted first-order part `Σ_k F¹_k e^{ik·θ}`.
    pub fn first_order(&self, theta: &[f64]) -> Complex64 {
        fourier_sum(self.terms.iter().map(|t| (&t.k, t.f1)), theta)
    }

    /// The machine-readable fit report.
    pub fn report(&self) -> FitReport {
        FitReport {
            curve: self.curve.clone(),
            tau: self.tau.clone(),
            levels: self.levels.clone(),
            per_k: self
                .terms
                .iter()
                .map(|t| FitReportTerm {
                    k: t.k.clone(),
                    f0: t.f0,
                    f1: t.f1,
                    residual: t.residual,
                    slope: t.slope,
                })
                .collect(),
        }
    }
}

/// Serialized form of an [`AsymptoticFit`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FitReport {
    /// Curve label.
    pub curve: String,
    /// Target actions.
    pub tau: Vec<f64>,
    /// Levels used.
    pub levels: Vec<u32>,
    /// Per-coefficient results.
    #[serde(rename = "per-k")]
    pub per_k: Vec<FitReportTerm>,
}

/// One coefficient of a [`FitReport`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FitReportTerm {
    /// Shift vector.
    pub k: Vec<i32>,
    /// `F⁰_k` as `[re, im]`.
    #[serde(rename = "F0")]
    pub f0: Complex64,
    /// `F¹_k` as `[re, im]`.
    #[serde(rename = "F1")]
    pub f1: Complex64,
    /// Fit residual.
    pub residual: f64,
    /// Remainder slope.
    pub slope: Option<f64>,
}

/// The default model degree for `m` levels: linear, plus a quadratic
/// nuisance term from four levels on.
pub fn default_degree(m: usize) -> usize {
    if m >= 4 {
        2
    } else {
        1
    }
}

/// Fits with a coefficient's model and estimates the model-order error by
/// refitting with one more degree when the levels allow it.
fn fit_with_gap(hs: &[f64], ys: &[Complex64], degree: usize) -> Result<(PolyFit, f64)> {
    let fit = fit_polynomial(hs, ys, degree)?;
    let gap = if hs.len() >= degree + 3 {
        match fit_polynomial(hs, ys, degree + 1) {
            Ok(hi) => (hi.coeffs[1] - fit.coeffs[1]).norm(),
            Err(_) => 0.0,
        }
    } else {
        0.0
    };
    Ok((fit, gap))
}

/// Extrapolates with the default model order.
pub fn extrapolate(sym: &PsiSymbol) -> Result<AsymptoticFit> {
    extrapolate_with(sym, default_degree(sym.samples.len()))
}

/// Extrapolates each coefficient `F_k(τ, ħ)` with a polynomial of the given
/// degree in `ħ`, after transporting every sample from its realized anchor
/// `c/r` to the target `τ` with the first-order Taylor term.
pub fn extrapolate_with(sym: &PsiSymbol, degree: usize) -> Result<AsymptoticFit> {
    let m = sym.samples.len();
    if m < 3 {
        return Err(Error::Fit(format!("{m} levels given, at least 3 are needed")));
    }
    let hs: Vec<f64> = sym.samples.iter().map(|s| s.hbar).collect();
    let n = sym.tau.len();
    let mut max_drift: f64 = 0.0;
    let mut drifts = Vec::with_capacity(m);
    for s in &sym.samples {
        let d: Vec<f64> = sym.tau.iter().zip(&s.tau).map(|(t, x)| t - x).collect();
        let worst = d.iter().fold(0.0f64, |a, x| a.max(x.abs()));
        if worst > 0.0 && !s.has_gradient() {
            return Err(Error::Domain(format!(
                "anchor at r = {} drifts by {worst:.3e} but its stencil leaves the domain",
                s.r
            )));
        }
        max_drift = max_drift.max(worst);
        drifts.push(d);
    }
    let with_grad = sym.samples.iter().all(SymbolSample::has_gradient);
    let keys: Vec<Vec<i32>> = {
        let mut ks: Vec<Vec<i32>> = sym
            .samples
            .iter()
            .flat_map(|s| s.terms.iter().map(|t| t.k.clone()))
            .collect();
        ks.sort();
        ks.dedup();
        ks
    };
    let mut condition: f64 = 0.0;
    let mut terms = Vec::with_capacity(keys.len());
    for k in keys {
        fn find<'a>(s: &'a SymbolSample, k: &[i32]) -> Option<&'a Term> {
            s.terms.iter().find(|t| t.k == k)
        }
        let ys: Vec<Complex64> = sym
            .samples
            .iter()
            .zip(&drifts)
            .map(|(s, d)| match find(s, &k) {
                Some(t) => {
                    let corr: Complex64 = t
                        .gradient
                        .iter()
                        .zip(d)
                        .map(|(gv, dx)| gv * *dx)
                        .sum();
                    t.value + corr
                }
                None => Complex64::default(),
            })
            .collect();
        let (fit, gap) = fit_with_gap(&hs, &ys, degree)?;
        condition = condition.max(fit.condition);
        let (f0, f1) = (fit.coeffs[0], fit.coeffs[1]);
        let remainders: Vec<f64> = hs
            .iter()
            .zip(&ys)
            .map(|(&h, y)| (y - f0 - f1 * h).norm())
            .collect();
        let mut df0 = Vec::new();
        let mut df0_uncertainty = Vec::new();
        if with_grad {
            for e in 0..n {
                let gs: Vec<Complex64> = sym
                    .samples
                    .iter()
                    .map(|s| find(s, &k).map(|t| t.gradient[e]).unwrap_or_default())
                    .collect();
                let (gf, ggap) = fit_with_gap(&hs, &gs, degree)?;
                df0.push(gf.coeffs[0]);
                // The constant term's error: standard error, or the shift
                // under one more order (estimated from the linear-term gap
                // scaled by the smallest ħ).
                let hmin = hs.iter().cloned().fold(f64::INFINITY, f64::min);
                df0_uncertainty.push(gf.stderr[0].max(ggap * hmin));
            }
        }
        terms.push(KFit {
            f1_uncertainty: fit.stderr[1].max(gap),
            slope: if remainders.iter().all(|&x| x < EXACT_RESIDUAL) {
                None
            } else {
                loglog_slope(&hs, &remainders, EXACT_RESIDUAL)
            },
            k,
            f0,
            f1,
            df0,
            df0_uncertainty,
            residual: fit.rms,
        });
    }
    Ok(AsymptoticFit {
        curve: sym.curve.clone(),
        class: sym.class,
        tau: sym.tau.clone(),
        levels: sym.samples.iter().map(|s| s.r).collect(),
        degree,
        condition,
        max_drift,
        terms,
    })
}

/// The first-order prediction `Δ_γ`: coefficients
/// `Δ_k = ½ Σ_e k_e ∂_{τ_e}F⁰_k`, i.e. `(1/2i) Σ_e ∂²σ⁰/∂τ_e∂θ_e`.
pub fn delta_term(fit: &AsymptoticFit) -> Result<Vec<(Vec<i32>, Complex64)>> {
    fit.terms
        .iter()
        .map(|t| {
            if t.df0.len() != t.k.len() {
                return Err(Error::Domain(
                    "the τ-stencil around the anchor leaves the admissible domain".into(),
                ));
            }
            let d: Complex64 = t
                .k
                .iter()
                .zip(&t.df0)
                .map(|(&ke, g)| g * (0.5 * ke as f64))
                .sum();
            Ok((t.k.clone(), d))
        })
        .collect()
}

/// The default `D_γ = F¹ − Δ_γ`, coefficient-wise.
pub fn default_term(fit: &AsymptoticFit, delta: &[(Vec<i32>, Complex64)]) -> Vec<(Vec<i32>, Complex64)> {
    fit.terms
        .iter()
        .map(|t| {
            let d = delta
                .iter()
                .find(|(k, _)| *k == t.k)
                .map(|(_, v)| *v)
                .unwrap_or_default();
            (t.k.clone(), t.f1 - d)
        })
        .collect()
}

/// The character component `χ([p_*γ]) Σ_k D_k e^{ik·θ}` of the default.
pub fn default_component(
    fit: &AsymptoticFit,
    default: &[(Vec<i32>, Complex64)],
    chi: &Character,
    theta: &[f64],
) -> Complex64 {
    fourier_sum(default.iter().map(|(k, v)| (k, *v)), theta) * chi.value(fit.class)
}

/// Outcome of the first-order identity check on one symbol.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FirstOrderReport {
    /// Curve label.
    pub curve: String,
    /// Target actions.
    pub tau: Vec<f64>,
    /// `sup_θ |D_γ| ≤ Σ_k |D_k|` (the same for every character).
    pub default_norm: f64,
    /// Fit-residual bound on the default: the propagated coefficient
    /// uncertainties plus a rounding floor.
    pub bound: f64,
    /// Levels.
    pub levels: Vec<u32>,
    /// `Σ_k |F_k(τ, ħ) − F⁰_k − ħΔ_k|` per level.
    pub residuals: Vec<f64>,
    /// Log–log slope of the residuals; `None` when they are all below
    /// [`EXACT_RESIDUAL`] (the symbol is exact to first order).
    pub slope: Option<f64>,
}

impl FirstOrderReport {
    /// Whether the first-order remainder vanishes identically.
    pub fn exact(&self) -> bool {
        self.slope.is_none() && self.residuals.iter().all(|&r| r < EXACT_RESIDUAL)
    }
}

/// Absolute rounding floor of the default bound, relative to the size of the
/// coefficients.
pub const DEFAULT_FLOOR: f64 = 1e-10;

/// Checks `F¹ = Δ_γ` on a sampled symbol and measures the remainder decay.
pub fn first_order_check(sym: &PsiSymbol, fit: &AsymptoticFit) -> Result<FirstOrderReport> {
    let delta = delta_term(fit)?;
    let default = default_term(fit, &delta);
    let default_norm = default.iter().map(|(_, v)| v.norm()).sum();
    let scale = fit.terms.iter().map(|t| t.f0.norm()).fold(1.0f64, f64::max);
    let bound = fit
        .terms
        .iter()
        .map(|t| {
            t.f1_uncertainty
                + t.k
                    .iter()
                    .zip(&t.df0_uncertainty)
                    .map(|(&ke, u)| 0.5 * (ke as f64).abs() * u)
                    .sum::<f64>()
        })
        .sum::<f64>()
        + DEFAULT_FLOOR * scale;
    let residuals: Vec<f64> = sym
        .samples
        .iter()
        .map(|s| {
            let drift: Vec<f64> = sym.tau.iter().zip(&s.tau).map(|(t, x)| t - x).collect();
            fit.terms
                .iter()
                .zip(&delta)
                .map(|(t, (_, d))| {
                    let y = s
                        .terms
                        .iter()
                        .find(|x| x.k == t.k)
                        .map(|x| {
                            x.value
                                + x.gradient
                                    .iter()
                                    .zip(&drift)
                                    .map(|(gv, dx)| gv * *dx)
                                    .sum::<Complex64>()
                        })
                        .unwrap_or_default();
                    (y - t.f0 - d * s.hbar).norm()
                })
                .sum()
        })
        .collect();
    let hs: Vec<f64> = sym.samples.iter().map(|s| s.hbar).collect();
    let slope = if residuals.iter().all(|&x| x < EXACT_RESIDUAL) {
        None
    } else {
        loglog_slope(&hs, &residuals, EXACT_RESIDUAL)
    };
    Ok(FirstOrderReport {
        curve: fit.curve.clone(),
        tau: fit.tau.clone(),
        default_norm,
        bound,
        levels: fit.levels.clone(),
        residuals,
        slope,
    })
}

/// Writes `(r, residual)` rows for log–log plotting.
pub fn write_convergence_csv<W: Write>(w: W, levels: &[u32], residuals: &[f64]) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["r", "hbar", "residual"])
        .map_err(|e| Error::Io(e.to_string()))?;
    for (r, x) in levels.iter().zip(residuals) {
        out.write_record([
            r.to_string(),
            format!("{:e}", 1.0 / *r as f64),
            format!("{x:e}"),
        ])
        .map_err(|e| Error::Io(e.to_string()))?;
    }
    out.flush()?;
    Ok(())
}

/// The composite symbol of `T^γ·T^δ` read from assembled operators: the
/// product's Fourier data at the anchor nearest to `tau`, with the sign
/// `i(γ, δ)` removed so that the coefficients are
/// `Σ_{k+l=m} F^γ_k((c+l)/r) F^δ_l(c/r)`.
pub fn composite_symbol(
    op_a: &CurveOperator,
    op_b: &CurveOperator,
    g: &DecoratedGraph,
    gamma: &MulticurveSpec,
    delta: &MulticurveSpec,
    tau: &RealColoring,
) -> Result<SymbolSample> {
    let product = compose(op_a, op_b)?;
    let mut s = symbol_from_operator(&product, g, tau)?;
    let sign = intersection_sign(gamma, delta);
    for t in &mut s.terms {
        t.value *= sign;
        for d in &mut t.gradient {
            *d *= sign;
        }
    }
    Ok(s)
}

/// The product formula at one level: the composite coefficients against
/// `σ^γσ^δ + (ħ/i) Σ_e ∂_{τ_e}σ^γ ∂_{θ_e}σ^δ`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CompositeSample {
    /// Level.
    pub r: u32,
    /// Anchor coloring.
    pub anchor: Vec<u32>,
    /// `F^{γδ}_m = Σ_{k+l=m} F^γ_k((c+l)/r) F^δ_l(c/r)`.
    pub composite: Vec<(Vec<i32>, Complex64)>,
    /// `P_m = Σ_{k+l=m} F^γ_k(c/r) F^δ_l(c/r)`.
    pub product: Vec<(Vec<i32>, Complex64)>,
    /// `B_m = Σ_{k+l=m} Σ_e l_e ∂_{τ_e}F^γ_k(c/r) F^δ_l(c/r)`; the bracket
    /// term is `ħ·B`.
    pub bracket: Vec<(Vec<i32>, Complex64)>,
}

impl CompositeSample {
    /// `ħ = 1/r`.
    pub fn hbar(&self) -> f64 {
        1.0 / self.r as f64
    }

    /// `Σ_m |F^{γδ}_m − P_m − κħB_m|`.
    pub fn residual(&self, kappa: f64) -> f64 {
        let h = self.hbar();
        self.composite
            .iter()
            .zip(&self.product)
            .zip(&self.bracket)
            .map(|(((_, f), (_, p)), (_, b))| (f - p - b * (kappa * h)).norm())
            .sum()
    }

    /// The least-squares `κ` with `F^{γδ} − P ≈ κħB`, or `None` when `B`
    /// vanishes.
    pub fn kappa(&self) -> Option<f64> {
        let h = self.hbar();
        let (mut num, mut den) = (0.0, 0.0);
        for (((_, f), (_, p)), (_, b)) in self.composite.iter().zip(&self.product).zip(&self.bracket) {
            let x = f - p;
            let y = b * h;
            num += (y.conj() * x).re;
            den += y.norm_sqr();
        }
        (den > 1e-24).then(|| num / den)
    }
}

/// Evaluates the composite symbol of `γ·δ` (apply `δ` first) at one level
/// from single rows.
pub fn composite_sample(
    ctx: &LevelContext,
    gamma: &MulticurveSpec,
    delta: &MulticurveSpec,
    tau: &[f64],
) -> Result<CompositeSample> {
    let g = ctx.graph.clone();
    let sg = SymbolSampler::new(&g, gamma);
    let real = RealColoring::from_internal(&g, tau)?;
    let anchor = anchor_coloring(&g, &ctx.level, &real, ANCHOR_RADIUS)?;
    let gs = sg.sample_at_coloring(ctx, anchor.colors.clone())?;
    if !gs.has_gradient() {
        return Err(Error::Domain(
            "the τ-stencil around the anchor leaves the admissible domain".into(),
        ));
    }
    let drow = ctx.row(delta, &anchor.colors)?;
    let ne = g.num_edges();
    let mut composite = Fourier::new();
    let mut product = Fourier::new();
    let mut bracket = Fourier::new();
    for (lfull, fd) in &drow.coefficients {
        let target = AdmissibleColoring::new(anchor.colors.clone())
            .shifted(lfull, ctx.r())
            .ok_or_else(|| Error::Inadmissible("row target leaves the level".into()))?;
        let grow = ctx.row(gamma, &target.colors)?;
        let l: Vec<i32> = g.internal_edges.iter().map(|&e| lfull[e]).collect();
        for (kfull, fg) in &grow.coefficients {
            let m: Vec<i32> = (0..ne).map(|e| kfull[e] + lfull[e]).collect();
            let mi: Vec<i32> = g.internal_edges.iter().map(|&e| m[e]).collect();
            *composite.entry(mi).or_default() += fg * fd;
        }
        for t in &gs.terms {
            let mi: Vec<i32> = t.k.iter().zip(&l).map(|(a, b)| a + b).collect();
            *product.entry(mi.clone()).or_default() += t.value * fd;
            let b: Complex64 = l
                .iter()
                .zip(&t.gradient)
                .map(|(&le, gv)| gv * le as f64)
                .sum();
            *bracket.entry(mi).or_default() += b * fd;
        }
    }
    let mut keys: Vec<Vec<i32>> = composite
        .keys()
        .chain(product.keys())
        .chain(bracket.keys())
        .cloned()
        .collect();
    keys.sort();
    keys.dedup();
    let pick = |f: &Fourier| -> Vec<(Vec<i32>, Complex64)> {
        keys.iter()
            .map(|k| (k.clone(), f.get(k).copied().unwrap_or_default()))
            .collect()
    };
    Ok(CompositeSample {
        r: ctx.r(),
        anchor: anchor.colors,
        composite: pick(&composite),
        product: pick(&product),
        bracket: pick(&bracket),
    })
}

/// The product formula checked over a level sweep.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CompositeReport {
    /// `γ·δ` label.
    pub pair: String,
    /// Levels.
    pub levels: Vec<u32>,
    /// `Σ_m |F^{γδ}_m − P_m − ħB_m|` per level.
    pub residuals: Vec<f64>,
    /// Log–log slope of the residuals (`None` when exact).
    pub slope: Option<f64>,
    /// Per-level fitted bracket constants.
    pub kappa_levels: Vec<Option<f64>>,
    /// The bracket constant extrapolated to `ħ = 0` (`None` when the bracket
    /// vanishes identically).
    pub kappa: Option<f64>,
}

/// Runs [`composite_sample`] over the levels (concurrently) and fits the
/// residual slope and the bracket constant.
pub fn composite_check(
    g: &DecoratedGraph,
    gamma: &MulticurveSpec,
    delta: &MulticurveSpec,
    tau: &[f64],
    levels: &[u32],
) -> Result<CompositeReport> {
    let samples = levels
        .par_iter()
        .map(|&r| {
            let ctx = LevelContext::new(g, r)?;
            composite_sample(&ctx, gamma, delta, tau)
        })
        .collect::<Result<Vec<_>>>()?;
    let hs: Vec<f64> = samples.iter().map(CompositeSample::hbar).collect();
    let residuals: Vec<f64> = samples.iter().map(|s| s.residual(1.0)).collect();
    let slope = if residuals.iter().all(|&x| x < EXACT_RESIDUAL) {
        None
    } else {
        loglog_slope(&hs, &residuals, EXACT_RESIDUAL)
    };
    let kappa_levels: Vec<Option<f64>> = samples.iter().map(CompositeSample::kappa).collect();
    let kappa = if kappa_levels.iter().all(Option::is_some) && hs.len() >= 2 {
        let ys: Vec<Complex64> = kappa_levels
            .iter()
            .map(|k| Complex64::new(k.unwrap_or_default(), 0.0))
            .collect();
        Some(fit_polynomial(&hs, &ys, 1)?.coeffs[0].re)
    } else {
        None
    };
    Ok(CompositeReport {
        pair: format!("{}·{}", gamma.label(g), delta.label(g)),
        levels: levels.to_vec(),
        residuals,
        slope,
        kappa_levels,
        kappa,
    })
}
