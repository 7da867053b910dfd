//! An independent SU(2) character-variety oracle.
//!
//! Representations of the fundamental group of each test surface are glued
//! from pairs of pants: [`pants_rep`] solves `ABC = 1` with prescribed traces,
//! and the pieces are glued along the decomposition curves `C_e` with a twist
//! `exp(θ_e·X_e)` about the axis `X_e` of `ρ(C_e)`.  The result is the
//! action-angle parametrization `R_χ(τ, θ)`: `Tr ρ(C_e) = 2cos(πτ_e)`, and
//! shifting `θ_e` flows along the twist.
//!
//! Angle origins: for every `τ` the origin of `θ_e` is placed at the maximum
//! of `Tr ρ(D_e)` in `θ_e` (the minimum of `f_{D_e} = −Tr ρ(D_e)`).  On the
//! punctured torus this is built into the closed-form gauge; on the other
//! surfaces `Tr ρ(D_e)` is a trigonometric polynomial `P + Q cos 2θ + R sin 2θ`
//! whose extremum is located exactly from three samples.
//!
//! The characters of the intersection algebra act by the half-period shifts
//! of [`origin_shift`]: `R_χ′(τ, θ) = R_χ(τ, θ + v)`.

pub mod quat;

pub use quat::{conjugator, Jet, QAlg, Quat};

use crate::coloring::real_triple_ok;
use crate::curves::{curve_word, standard_curve, CurveWord, StandardKind};
use crate::error::{Error, Result};
use crate::surface::graph::DecoratedGraph;
use crate::surface::homology::{characters, rel_h1_basis, Character, H1Basis};
use crate::surface::standard::TestSurface;
use serde::Serialize;
use std::collections::BTreeMap;
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

/// Margin from the boundary of the real coloring domain below which
/// representations are refused (they approach reducible ones).
pub const IRREDUCIBILITY_MARGIN: f64 = 1e-6;

/// Solves `ABC = 1` with `Tr A = 2cos πτ_a`, `Tr B = 2cos πτ_b`,
/// `Tr C = 2cos πτ_c`, in the gauge where `A = exp(πτ_a i)` and the axis of `B`
/// lies in the `(i, j)`-plane with a nonnegative `j` component.
///
/// ```
/// use curveops::charvar::pants_rep;
/// let [a, b, c] = pants_rep(0.5, 0.5, 0.5).unwrap();
/// assert!((a.x - 1.0).abs() < 1e-15 && (b.y - 1.0).abs() < 1e-15);
/// assert!((c.z + 1.0).abs() < 1e-15);
/// ```
pub fn pants_rep(ta: f64, tb: f64, tc: f64) -> Result<[Quat; 3]> {
    let m = IRREDUCIBILITY_MARGIN;
    let inside = |x: f64| x > m && x < 1.0 - m;
    if !(inside(ta) && inside(tb) && inside(tc))
        || !real_triple_ok(ta + m, tb + m, tc + m)
        || !(tc + m < ta + tb && ta + m < tb + tc && tb + m < ta + tc)
    {
        return Err(Error::Domain(format!(
            "({ta}, {tb}, {tc}) is not strictly admissible"
        )));
    }
    let (al, be, ga) = (PI * ta, PI * tb, PI * tc);
    let cphi = (al.cos() * be.cos() - ga.cos()) / (al.sin() * be.sin());
    if cphi.abs() >= 1.0 {
        return Err(Error::Domain(format!(
            "({ta}, {tb}, {tc}) admits no SU(2) pants"
        )));
    }
    let phi = cphi.acos();
    let a = Quat::exp(al, [1.0, 0.0, 0.0]);
    let b = Quat::exp(be, [phi.cos(), phi.sin(), 0.0]);
    let c = (a * b).conj();
    Ok([a, b, c])
}

/// Images of the generators of one test surface, as a function of the
/// effective angles (origins already applied).
fn build_generators<T: QAlg>(
    surface: TestSurface,
    tau: &[f64],
    boundary: &[f64],
    theta: &[f64],
    seed: Option<usize>,
) -> Result<BTreeMap<String, T>> {
    let c = T::constant;
    let s = |e: usize| seed == Some(e);
    let mut out = BTreeMap::new();
    match surface {
        TestSurface::Torus => {
            let (te, tf) = (tau[0], boundary[0]);
            // Existence of the pants (τ_e, τ_e, τ_f) is the domain condition.
            pants_rep(te, te, tf)?;
            let sb = (PI * tf / 2.0).sin() / (PI * te).sin();
            let beta = sb.clamp(-1.0, 1.0).asin();
            let a = Quat::exp(PI * te, [1.0, 0.0, 0.0]);
            let b0 = Quat::exp(beta, [0.0, 1.0, 0.0]);
            let minus_b0 = Quat::new(-b0.w, -b0.x, -b0.y, -b0.z);
            out.insert("a".into(), c(a));
            out.insert("b".into(), c(minus_b0) * T::twist(theta[0], [1.0, 0.0, 0.0], s(0)));
        }
        TestSurface::Sphere4 => {
            let te = tau[0];
            let [ce, x1, x2] = pants_rep(te, boundary[0], boundary[1])?;
            let [de, x3, x4] = pants_rep(te, boundary[2], boundary[3])?;
            let g0 = conjugator(de.conj(), ce);
            let g = T::twist(theta[0], ce.axis(), s(0)) * c(g0);
            out.insert("x1".into(), c(x1));
            out.insert("x2".into(), c(x2));
            out.insert("x3".into(), g * c(x3) * g.inv());
            out.insert("x4".into(), g * c(x4) * g.inv());
        }
        TestSurface::Genus2 => {
            let [a1, a2, a3] = pants_rep(tau[0], tau[1], tau[2])?;
            let [b1, b2, b3] = [a1, a2, a3];
            let gg = c(conjugator(b1, a1.conj())) * T::twist(theta[0], b1.axis(), s(0));
            let act = |q: Quat| gg * c(q) * gg.inv();
            let k2 = conjugator(b2, a2.conj());
            let k3 = conjugator(b3, a3.conj());
            let t2 = c(k2) * T::twist(theta[1], b2.axis(), s(1)) * gg.inv();
            let t3 = c(k3) * T::twist(theta[2], b3.axis(), s(2)) * gg.inv();
            out.insert("A1".into(), c(a1));
            out.insert("A2".into(), c(a2));
            out.insert("A3".into(), c(a3));
            out.insert("B1".into(), act(b1));
            out.insert("B2".into(), act(b2));
            out.insert("B3".into(), act(b3));
            out.insert("t2".into(), t2);
            out.insert("t3".into(), t3);
        }
    }
    Ok(out)
}

fn eval_component<T: QAlg>(gens: &BTreeMap<String, T>, letters: &[(String, i64)]) -> Result<T> {
    let mut acc = T::constant(Quat::ONE);
    for (name, k) in letters {
        let g = *gens
            .get(name)
            .ok_or_else(|| Error::Usage(format!("unknown generator {name:?}")))?;
        let base = if *k < 0 { g.inv() } else { g };
        for _ in 0..k.unsigned_abs() {
            acc = acc * base;
        }
    }
    Ok(acc)
}

/// Lattices of angle shifts, in units of `π` over the internal edges: `Λ`
/// spanned by `2u_e` and `u_e + u_f + u_g` for each vertex (legs dropped), and
/// `Λ′ = ⊕ Z·u_e`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AngleLattice {
    /// Generators of `Λ` (units of `π`).
    pub lambda: Vec<Vec<i64>>,
    /// Generators of `Λ′` (units of `π`).
    pub lambda_prime: Vec<Vec<i64>>,
}

impl AngleLattice {
    /// The lattices of a graph.
    pub fn new(g: &DecoratedGraph) -> Self {
        let n = g.internal_edges.len();
        let pos = |e: usize| g.internal_edges.iter().position(|&x| x == e);
        let mut lambda: Vec<Vec<i64>> = (0..n)
            .map(|i| {
                let mut v = vec![0; n];
                v[i] = 2;
                v
            })
            .collect();
        for v in g.internal_vertices() {
            let mut w = vec![0i64; n];
            for e in g.vertex_edges(v) {
                if let Some(i) = pos(e) {
                    w[i] += 1;
                }
            }
            lambda.push(w);
        }
        let lambda_prime = (0..n)
            .map(|i| {
                let mut v = vec![0; n];
                v[i] = 1;
                v
            })
            .collect();
        AngleLattice { lambda, lambda_prime }
    }

    /// Whether an integer vector (units of `π`) lies in `Λ`.
    pub fn contains(&self, v: &[i64]) -> bool {
        // 2Λ′ ⊆ Λ, so membership is a question about parities.
        let target: Vec<u8> = v.iter().map(|x| x.rem_euclid(2) as u8).collect();
        let rows: Vec<Vec<u8>> = self
            .lambda
            .iter()
            .map(|w| w.iter().map(|x| x.rem_euclid(2) as u8).collect())
            .collect();
        solve_gf2(&rows_transpose(&rows, v.len()), &target, false).is_some()
    }
}

fn rows_transpose(rows: &[Vec<u8>], n: usize) -> Vec<Vec<u8>> {
    (0..n).map(|i| rows.iter().map(|r| r[i]).collect()).collect()
}

/// Solves `M x = b` over Z/2.  With `drop_inconsistent`, equations that
/// reduce to `0 = 1` are discarded instead of failing.
fn solve_gf2(m: &[Vec<u8>], b: &[u8], drop_inconsistent: bool) -> Option<Vec<u8>> {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut a: Vec<Vec<u8>> = m
        .iter()
        .zip(b)
        .map(|(r, &bi)| {
            let mut v = r.clone();
            v.push(bi);
            v
        })
        .collect();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        let Some(p) = (row..rows).find(|&i| a[i][col] == 1) else {
            continue;
        };
        a.swap(row, p);
        for i in 0..rows {
            if i != row && a[i][col] == 1 {
                let src = a[row].clone();
                for (x, y) in a[i].iter_mut().zip(&src) {
                    *x ^= y;
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    if !drop_inconsistent && a[row..].iter().any(|r| r[cols] == 1) {
        return None;
    }
    let mut x = vec![0u8; cols];
    for (i, &c) in pivots.iter().enumerate() {
        x[c] = a[i][cols];
    }
    Some(x)
}

/// The origin shift `v ∈ Λ′/Λ` (units of `π`, over the internal edges) with
/// `R_χ′(τ, θ) = R_χ(τ, θ + πv)`.
///
/// The ratio `χ′/χ` is a linear form `λ` on `H₁(Γ, ∂Γ; Z/2)`; by Poincaré
/// duality `λ = ⟨C, ·⟩` for a class `C`, and `C = Σ v_e [C_e]` in the basis of
/// decomposition curves dual to the fundamental cycles.  Components of `λ` on
/// the radical of the intersection form are seen by no intersection number
/// and are dropped.
pub fn origin_shift(g: &DecoratedGraph, basis: &H1Basis, chi: &Character, chi2: &Character) -> Vec<i64> {
    let lam = chi.ratio(chi2);
    let c = solve_gf2(&basis.intersection, &lam, true).unwrap_or_else(|| vec![0; lam.len()]);
    let mut v = vec![0i64; g.internal_edges.len()];
    for (j, &e) in basis.cotree_edges.iter().enumerate() {
        let i = g.internal_edges.iter().position(|&x| x == e).expect("cotree edge is internal");
        v[i] = c[j] as i64;
    }
    v
}

/// The character-variety model of one test surface: boundary data, the
/// characters, and the angle lattices.
#[derive(Debug, Clone)]
pub struct CharVarModel {
    /// The surface.
    pub surface: TestSurface,
    /// Its graph.
    pub graph: DecoratedGraph,
    /// Boundary traces `t_i` (marked-point fractions) in marked order.
    pub boundary: Vec<f64>,
    /// Homology basis.
    pub basis: H1Basis,
    /// All characters; index 0 is the reference.
    pub characters: Vec<Character>,
    /// Angle lattices.
    pub lattice: AngleLattice,
    dual_words: Vec<CurveWord>,
}

/// A representation `R_χ(τ, θ)`.
#[derive(Debug, Clone, Serialize)]
pub struct SurfaceRepresentation {
    /// Surface name.
    pub surface: String,
    /// Actions `τ` over the internal edges.
    pub tau: Vec<f64>,
    /// Angles `θ` over the internal edges.
    pub theta: Vec<f64>,
    /// Character index.
    pub character: usize,
    /// Generator images as quaternions `[w, x, y, z]`.
    pub generators: BTreeMap<String, Quat>,
}

impl SurfaceRepresentation {
    /// Holonomy of one word component.
    pub fn holonomy(&self, letters: &[(String, i64)]) -> Result<Quat> {
        eval_component(&self.generators, letters)
    }

    /// `f_γ(ρ) = ∏ −Tr ρ(γ_i)` over the components of the word.
    pub fn trace_function(&self, w: &CurveWord) -> Result<f64> {
        w.components
            .iter()
            .try_fold(1.0, |acc, comp| Ok(acc * -self.holonomy(comp)?.trace()))
    }

    /// Largest residual of the defining relations and boundary conditions.
    pub fn relation_residual(&self, boundary: &[f64]) -> Result<f64> {
        let q = |s: &str| self.generators[s];
        let periph = |x: Quat, t: f64| (x.trace() - 2.0 * (PI * t).cos()).abs();
        Ok(match self.surface.as_str() {
            "torus" => {
                let (a, b) = (q("a"), q("b"));
                periph(a * b * a.conj() * b.conj(), boundary[0])
            }
            "sphere4" => {
                let prod = q("x1") * q("x2") * q("x3") * q("x4");
                let mut worst = prod.dist(Quat::ONE);
                for (i, x) in ["x1", "x2", "x3", "x4"].iter().enumerate() {
                    worst = worst.max(periph(q(x), boundary[i]));
                }
                worst
            }
            _ => {
                let rels = [
                    q("A1") * q("A2") * q("A3"),
                    q("B1") * q("B2") * q("B3"),
                    q("B1") * q("A1"),
                    q("t2") * q("B2") * q("t2").conj() * q("A2"),
                    q("t3") * q("B3") * q("t3").conj() * q("A3"),
                ];
                rels.iter().map(|r| r.dist(Quat::ONE)).fold(0.0, f64::max)
            }
        })
    }

    /// Smallest commutator defect `|gh − hg|` over pairs of generators: the
    /// representation is non-commutative when this is large.
    pub fn noncommutativity(&self) -> f64 {
        let gens: Vec<Quat> = self.generators.values().copied().collect();
        let mut best: f64 = 0.0;
        for i in 0..gens.len() {
            for j in (i + 1)..gens.len() {
                best = best.max((gens[i] * gens[j]).dist(gens[j] * gens[i]));
            }
        }
        best
    }
}

/// A function on the character variety.
#[derive(Debug, Clone, PartialEq)]
pub enum Observable {
    /// The moment map `h_{C_e} = (1/π) acos(−f_{C_e}/2)` of the `i`-th internal
    /// edge.
    Moment(usize),
    /// A trace function `f_γ`.
    Trace(CurveWord),
}

impl CharVarModel {
    /// Model with the default boundary fractions.
    pub fn new(surface: TestSurface) -> Result<Self> {
        Self::with_graph(surface, surface.graph())
    }

    /// Model on a given graph of the surface (boundary fractions taken from
    /// its marked points).
    pub fn with_graph(surface: TestSurface, graph: DecoratedGraph) -> Result<Self> {
        let boundary = graph
            .marked
            .iter()
            .map(|m| m.fraction.0 as f64 / m.fraction.1 as f64)
            .collect();
        let basis = rel_h1_basis(&graph);
        let characters = characters(&basis);
        let lattice = AngleLattice::new(&graph);
        let dual_words = graph
            .internal_edges
            .iter()
            .map(|&e| {
                let d = standard_curve(&graph, StandardKind::Dual, e)?;
                curve_word(surface, &graph, &d)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(CharVarModel {
            surface,
            graph,
            boundary,
            basis,
            characters,
            lattice,
            dual_words,
        })
    }

    /// Number of internal edges (action-angle pairs).
    pub fn dim(&self) -> usize {
        self.graph.internal_edges.len()
    }

    fn check_tau(&self, tau: &[f64]) -> Result<()> {
        if tau.len() != self.dim() {
            return Err(Error::Usage(format!(
                "{} needs {} actions, got {}",
                self.surface.name(),
                self.dim(),
                tau.len()
            )));
        }
        Ok(())
    }

    /// Angle origins at `τ`: the values of the raw twist angles at which
    /// `Tr ρ(D_e)` is maximal.
    pub fn origins(&self, tau: &[f64]) -> Result<Vec<f64>> {
        self.check_tau(tau)?;
        let n = self.dim();
        if self.surface == TestSurface::Torus {
            return Ok(vec![0.0; n]);
        }
        let mut out = vec![0.0; n];
        for e in 0..n {
            let sample = |t: f64| -> Result<f64> {
                let mut th = vec![0.0; n];
                th[e] = t;
                let gens: BTreeMap<String, Quat> =
                    build_generators(self.surface, tau, &self.boundary, &th, None)?;
                Ok(eval_component(&gens, &self.dual_words[e].components[0])?.trace())
            };
            let (s0, s1, s2) = (sample(0.0)?, sample(FRAC_PI_4)?, sample(FRAC_PI_2)?);
            let p = 0.5 * (s0 + s2);
            let (q, r) = (s0 - p, s1 - p);
            out[e] = 0.5 * r.atan2(q);
        }
        Ok(out)
    }

    /// Shift of character `chi` relative to the reference character, units
    /// of `π`.
    pub fn character_shift(&self, chi: usize) -> Result<Vec<i64>> {
        let c = self.characters.get(chi).ok_or_else(|| {
            Error::Usage(format!(
                "character {chi} out of range ({} characters)",
                self.characters.len()
            ))
        })?;
        Ok(origin_shift(&self.graph, &self.basis, &self.characters[0], c))
    }

    fn effective_angles(&self, tau: &[f64], theta: &[f64], chi: usize) -> Result<Vec<f64>> {
        self.check_tau(tau)?;
        if theta.len() != self.dim() {
            return Err(Error::Usage(format!(
                "{} needs {} angles, got {}",
                self.surface.name(),
                self.dim(),
                theta.len()
            )));
        }
        let origins = self.origins(tau)?;
        let shift = self.character_shift(chi)?;
        Ok((0..self.dim())
            .map(|i| theta[i] + origins[i] + PI * shift[i] as f64)
            .collect())
    }

    /// The representation `R_χ(τ, θ)`.
    pub fn represent(&self, tau: &[f64], theta: &[f64], chi: usize) -> Result<SurfaceRepresentation> {
        let eff = self.effective_angles(tau, theta, chi)?;
        let generators = build_generators(self.surface, tau, &self.boundary, &eff, None)?;
        Ok(SurfaceRepresentation {
            surface: self.surface.name().to_string(),
            tau: tau.to_vec(),
            theta: theta.to_vec(),
            character: chi,
            generators,
        })
    }

    /// `∂f_γ/∂θ_e` at `(τ, θ)`, computed exactly by differentiating the
    /// twist factor of edge `e` (the infinitesimal twist flow).
    pub fn twist_derivative(
        &self,
        w: &CurveWord,
        tau: &[f64],
        theta: &[f64],
        chi: usize,
        e: usize,
    ) -> Result<f64> {
        let eff = self.effective_angles(tau, theta, chi)?;
        let gens: BTreeMap<String, Jet> =
            build_generators(self.surface, tau, &self.boundary, &eff, Some(e))?;
        // d/dθ ∏ (−Tr w_i) by the product rule.
        let vals: Vec<Jet> = w
            .components
            .iter()
            .map(|c| eval_component(&gens, c))
            .collect::<Result<_>>()?;
        let mut total = 0.0;
        for i in 0..vals.len() {
            let mut term = -vals[i].d.trace();
            for (j, v) in vals.iter().enumerate() {
                if j != i {
                    term *= -v.v.trace();
                }
            }
            total += term;
        }
        Ok(total)
    }

    /// Value of an observable.
    pub fn evaluate(&self, obs: &Observable, tau: &[f64], theta: &[f64], chi: usize) -> Result<f64> {
        let rho = self.represent(tau, theta, chi)?;
        match obs {
            Observable::Trace(w) => rho.trace_function(w),
            Observable::Moment(i) => {
                let e = *self
                    .graph
                    .internal_edges
                    .get(*i)
                    .ok_or_else(|| Error::Usage(format!("no internal edge {i}")))?;
                let c = standard_curve(&self.graph, StandardKind::Decomposition, e)?;
                let w = curve_word(self.surface, &self.graph, &c)?;
                let f = rho.trace_function(&w)?;
                Ok((-f / 2.0).clamp(-1.0, 1.0).acos() / PI)
            }
        }
    }

    /// Gradient `(∂_τ f, ∂_θ f)` by central differences with step `h`.
    pub fn gradient(
        &self,
        obs: &Observable,
        tau: &[f64],
        theta: &[f64],
        chi: usize,
        h: f64,
    ) -> Result<(Vec<f64>, Vec<f64>)> {
        let n = self.dim();
        let mut dt = vec![0.0; n];
        let mut da = vec![0.0; n];
        for e in 0..n {
            let mut tp = tau.to_vec();
            let mut tm = tau.to_vec();
            tp[e] += h;
            tm[e] -= h;
            dt[e] = (self.evaluate(obs, &tp, theta, chi)? - self.evaluate(obs, &tm, theta, chi)?)
                / (2.0 * h);
            let mut ap = theta.to_vec();
            let mut am = theta.to_vec();
            ap[e] += h;
            am[e] -= h;
            da[e] = (self.evaluate(obs, tau, &ap, chi)? - self.evaluate(obs, tau, &am, chi)?)
                / (2.0 * h);
        }
        Ok((dt, da))
    }

    /// `{f, g} = Σ_e ∂_{τ_e}f ∂_{θ_e}g − ∂_{θ_e}f ∂_{τ_e}g` by central
    /// differences with step `h` (symplectic form `ω = Σ dτ_e ∧ dθ_e`).
    pub fn poisson_bracket(
        &self,
        f: &Observable,
        g: &Observable,
        tau: &[f64],
        theta: &[f64],
        chi: usize,
        h: f64,
    ) -> Result<f64> {
        let (ft, fa) = self.gradient(f, tau, theta, chi, h)?;
        let (gt, ga) = self.gradient(g, tau, theta, chi, h)?;
        Ok((0..self.dim()).map(|e| ft[e] * ga[e] - fa[e] * gt[e]).sum())
    }
}

/// Goldman's bracket of the trace functions of two curves meeting in one
/// transverse point, `Tr ρ(uv) − ½ Tr ρ(u) Tr ρ(v)` (oriented so that `uv` is
/// the resolution at the crossing).
pub fn goldman_single_crossing(rho: &SurfaceRepresentation, u: &[(String, i64)], v: &[(String, i64)]) -> Result<f64> {
    let a = rho.holonomy(u)?;
    let b = rho.holonomy(v)?;
    Ok((a * b).trace() - 0.5 * a.trace() * b.trace())
}
