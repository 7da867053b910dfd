//! Property suites: coloring enumeration, sign bookkeeping, characters,
//! representation relations and the trace identity.

use super::suites::{random_tau, random_word, rng_for};
use super::{model, Check, ConvergenceTable, Suite, SurfaceCtx};
use crate::coloring::{enumerate_colorings, Level, RealColoring};
use crate::curves::{standard_curve, CurveWord, MulticurveSpec, StandardKind};
use crate::error::Result;
use crate::fusion::{assemble_operator, LevelContext, OperatorContext};
use crate::surface::{
    algebra_mul, characters, intersection_sign, product_sign, project_class, rel_h1_basis,
    AlgebraElement, RelH1Class,
};
use crate::symbol::{composite_sample, composite_symbol};
use num_complex::Complex64;
use rand::Rng;
use std::collections::BTreeSet;
use std::f64::consts::PI;

type SuiteOutput = Result<(Vec<Check>, Vec<ConvergenceTable>)>;

/// Admissibility written out directly in strand numbers `i = c − 1`:
/// even sum, triangle inequalities, and sum at most `2(r − 2)`.
fn admissible_by_strands(i: i64, j: i64, k: i64, r: i64) -> bool {
    (i + j + k) % 2 == 0 && i <= j + k && j <= i + k && k <= i + j && i + j + k <= 2 * (r - 2)
}

/// Enumeration against a brute-force scan of every color assignment.
pub fn enumeration(ctx: &SurfaceCtx) -> SuiteOutput {
    let g = &ctx.graph;
    let mut checks = Vec::new();
    for r in ctx.levels(Suite::Enumeration) {
        let name = ctx.name(format!("r={r}"));
        let level = match Level::new(g, r) {
            Ok(l) => l,
            Err(e) => {
                checks.push(Check::from_error(Suite::Enumeration, name, &e));
                continue;
            }
        };
        let fast: BTreeSet<Vec<u32>> = enumerate_colorings(g, &level)
            .into_iter()
            .map(|c| c.colors)
            .collect();
        let mut brute = BTreeSet::new();
        let n = g.internal_edges.len() as u32;
        let mut colors = vec![0u32; g.num_edges()];
        for (i, m) in g.marked.iter().enumerate() {
            colors[m.edge] = level.boundary[i];
        }
        for idx in 0..(r - 1).pow(n) {
            let mut rem = idx;
            for &e in &g.internal_edges {
                colors[e] = 1 + rem % (r - 1);
                rem /= r - 1;
            }
            let ok = g.internal_vertices().all(|v| {
                let [x, y, z] = g.vertex_edges(v);
                let s = |e: usize| colors[e] as i64 - 1;
                admissible_by_strands(s(x), s(y), s(z), r as i64)
            });
            if ok {
                brute.insert(colors.clone());
            }
        }
        let mismatches = fast.symmetric_difference(&brute).count();
        checks.push(Check::at_most(
            Suite::Enumeration,
            name,
            mismatches as f64,
            0.0,
            &format!(
                "colorings found by enumeration ({}) against a brute-force scan ({}); mismatches shown",
                fast.len(),
                brute.len()
            ),
        ));
    }
    Ok((checks, vec![]))
}

/// `i(γ, δ) = ⟨p_*γ, p_*δ⟩` on the curve library, and the operator product
/// `T^γ T^δ` (sign removed) against the row-level composite symbol.
pub fn intersection_sign_suite(ctx: &SurfaceCtx) -> SuiteOutput {
    let g = &ctx.graph;
    let basis = rel_h1_basis(g);
    let curves = ctx.curves()?;
    let mut mismatches = 0usize;
    for a in &curves {
        for b in &curves {
            let want = product_sign(&basis, project_class(g, &basis, a), project_class(g, &basis, b));
            if intersection_sign(a, b) != want {
                mismatches += 1;
            }
        }
    }
    let mut checks = vec![Check::at_most(
        Suite::IntersectionSign,
        ctx.name("library-pairs"),
        mismatches as f64,
        0.0,
        &format!(
            "pairs among {} library curves where i(γ,δ) differs from the product-rule sign",
            curves.len()
        ),
    )];
    let e0 = g.internal_edges[0];
    let c = standard_curve(g, StandardKind::Decomposition, e0)?;
    let d = standard_curve(g, StandardKind::Dual, e0)?;
    let t = standard_curve(g, StandardKind::TwistedDual(1), e0)?;
    let mut pairs = vec![(c.clone(), d.clone()), (d.clone(), c), (d.clone(), t)];
    if g.internal_edges.len() > 1 {
        let d2 = standard_curve(g, StandardKind::Dual, g.internal_edges[1])?;
        pairs.push((d.clone(), d2.clone()));
        pairs.push((d2, d));
    }
    let tau = ctx.anchors(Suite::IntersectionSign)[0].clone();
    for r in ctx.levels(Suite::IntersectionSign) {
        for (a, b) in &pairs {
            let name = ctx.name(format!("{}·{}/r={r}", a.label(g), b.label(g)));
            let run = || -> Result<f64> { composite_defect(g, a, b, &tau, r) };
            checks.push(match run() {
                Ok(x) => Check::at_most(
                    Suite::IntersectionSign,
                    name,
                    x,
                    ctx.tol.composite_sign,
                    "operator product T^γT^δ times i(γ,δ) against the row composite, relative",
                ),
                Err(e) => Check::from_error(Suite::IntersectionSign, name, &e),
            });
        }
    }
    Ok((checks, vec![]))
}

fn composite_defect(
    g: &crate::surface::DecoratedGraph,
    a: &MulticurveSpec,
    b: &MulticurveSpec,
    tau: &[f64],
    r: u32,
) -> Result<f64> {
    let oc = OperatorContext::new(g, r)?;
    let (opa, opb) = (assemble_operator(&oc, a)?, assemble_operator(&oc, b)?);
    let real = RealColoring::from_internal(g, tau)?;
    let from_ops = composite_symbol(&opa, &opb, g, a, b, &real)?;
    let from_rows = composite_sample(&LevelContext::new(g, r)?, a, b, tau)?;
    if from_ops.anchor != from_rows.anchor {
        return Ok(f64::INFINITY);
    }
    let mut worst: f64 = 0.0;
    for (k, v) in &from_rows.composite {
        worst = worst.max((from_ops.value(k) - v).norm() / v.norm().max(1.0));
    }
    for term in &from_ops.terms {
        if !from_rows.composite.iter().any(|(k, _)| *k == term.k) {
            worst = worst.max(term.value.norm());
        }
    }
    Ok(worst)
}

/// Every character is multiplicative on the intersection algebra:
/// `χ([a][b]) = χ([a])χ([b])` over all pairs of classes.
pub fn characters_suite(ctx: &SurfaceCtx) -> SuiteOutput {
    let basis = rel_h1_basis(&ctx.graph);
    let n = basis.dim();
    let chars = characters(&basis);
    let one = Complex64::new(1.0, 0.0);
    let mut worst: f64 = 0.0;
    for chi in &chars {
        for x in 0..(1u64 << n) {
            for y in 0..(1u64 << n) {
                let (a, b) = (RelH1Class(x), RelH1Class(y));
                let prod = algebra_mul(
                    &basis,
                    &AlgebraElement::monomial(n, a, one),
                    &AlgebraElement::monomial(n, b, one),
                )?;
                worst = worst.max((chi.apply(&prod) - chi.value(a) * chi.value(b)).norm());
            }
        }
    }
    Ok((
        vec![Check::at_most(
            Suite::Characters,
            ctx.name("multiplicative"),
            worst,
            0.0,
            &format!(
                "largest |χ([a][b]) − χ([a])χ([b])| over {} characters and all class pairs",
                chars.len()
            ),
        )],
        vec![],
    ))
}

/// Random representations satisfy the defining relations and the boundary
/// conditions.
pub fn relations(ctx: &SurfaceCtx) -> SuiteOutput {
    let m = model(ctx)?;
    let mut rng = rng_for(ctx, 101);
    let mut worst: f64 = 0.0;
    for _ in 0..ctx.tol.random_points {
        let tau = random_tau(ctx.surface, &mut rng);
        let theta: Vec<f64> = (0..m.dim()).map(|_| rng.gen_range(-PI..PI)).collect();
        let chi = rng.gen_range(0..m.characters.len());
        worst = worst.max(m.represent(&tau, &theta, chi)?.relation_residual(&m.boundary)?);
    }
    Ok((
        vec![Check::at_most(
            Suite::Relations,
            ctx.name("relations"),
            worst,
            ctx.tol.relation,
            "largest relation or boundary-trace residual over random (τ, θ, χ)",
        )],
        vec![],
    ))
}

/// `f_u f_v = −(f_{uv} + f_{uv⁻¹})` for random words at random points.
pub fn trace_identity(ctx: &SurfaceCtx) -> SuiteOutput {
    let m = model(ctx)?;
    let mut rng = rng_for(ctx, 202);
    let mut worst: f64 = 0.0;
    for _ in 0..ctx.tol.random_points {
        let tau = random_tau(ctx.surface, &mut rng);
        let theta: Vec<f64> = (0..m.dim()).map(|_| rng.gen_range(-PI..PI)).collect();
        let chi = rng.gen_range(0..m.characters.len());
        let rho = m.represent(&tau, &theta, chi)?;
        let gens: Vec<String> = rho.generators.keys().cloned().collect();
        let u = random_word(&gens, &mut rng).components.remove(0);
        let v = random_word(&gens, &mut rng).components.remove(0);
        let inv: Vec<(String, i64)> = v.iter().rev().map(|(s, k)| (s.clone(), -k)).collect();
        let f = |w: Vec<(String, i64)>| rho.trace_function(&CurveWord { components: vec![w] });
        let uv = [u.clone(), v.clone()].concat();
        let uvi = [u.clone(), inv].concat();
        let lhs = f(u)? * f(v)?;
        let rhs = -(f(uv)? + f(uvi)?);
        worst = worst.max((lhs - rhs).abs() / lhs.abs().max(1.0));
    }
    Ok((
        vec![Check::at_most(
            Suite::TraceIdentity,
            ctx.name("sl2-trace-identity"),
            worst,
            ctx.tol.trace_identity,
            "largest |f_u f_v + f_uv + f_uv⁻¹| / max(1, |f_u f_v|) over random words and points",
        )],
        vec![],
    ))
}
