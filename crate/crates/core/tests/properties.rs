//! Randomized properties over colorings, fits and representations.

use curveops::charvar::{CharVarModel, Observable};
use curveops::coloring::{enumerate_colorings, is_admissible, Level};
use curveops::curves::{standard_curve, CurveWord, StandardKind};
use curveops::fusion::{LevelContext, OperatorContext, assemble_operator};
use curveops::surface::TestSurface;
use curveops::symbol::fit_polynomial;
use num_complex::Complex64;
use proptest::prelude::*;
use std::f64::consts::PI;

fn surface() -> impl Strategy<Value = TestSurface> {
    prop_oneof![
        Just(TestSurface::Torus),
        Just(TestSurface::Sphere4),
        Just(TestSurface::Genus2)
    ]
}

fn feasible_level(s: TestSurface, n: u32) -> u32 {
    match s {
        TestSurface::Torus => 8 * n + 4,
        TestSurface::Sphere4 => 4 * (n + 1),
        TestSurface::Genus2 => n + 3,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    /// Every shift of an admissible coloring by a row's support stays
    /// admissible, and the row's coefficients of a dual curve are finite.
    #[test]
    fn row_targets_are_admissible(s in surface(), n in 1u32..4, pick in 0usize..1000) {
        let g = s.graph();
        let r = feasible_level(s, n);
        let level = Level::new(&g, r).unwrap();
        let colorings = enumerate_colorings(&g, &level);
        prop_assume!(!colorings.is_empty());
        let c = &colorings[pick % colorings.len()];
        let ctx = LevelContext::new(&g, r).unwrap();
        let d = standard_curve(&g, StandardKind::Dual, g.internal_edges[0]).unwrap();
        let row = ctx.row(&d, &c.colors).unwrap();
        for (k, v) in &row.coefficients {
            let t = c.shifted(k, r).expect("row target is a coloring");
            prop_assert!(is_admissible(&t, &g, &level));
            prop_assert!(v.re.is_finite() && v.im.is_finite());
        }
    }

    /// The least-squares fit recovers an exact polynomial.
    #[test]
    fn fit_recovers_polynomials(c0 in -3.0f64..3.0, c1 in -3.0f64..3.0, c2 in -3.0f64..3.0) {
        let hs: Vec<f64> = [100.0, 140.0, 220.0, 340.0, 460.0, 700.0].iter().map(|r| 1.0 / r).collect();
        let ys: Vec<Complex64> = hs.iter().map(|h| Complex64::new(c0 + c1 * h + c2 * h * h, -c1)).collect();
        let fit = fit_polynomial(&hs, &ys, 2).unwrap();
        prop_assert!((fit.coeffs[0] - Complex64::new(c0, -c1)).norm() < 1e-9);
        prop_assert!((fit.coeffs[1].re - c1).abs() < 1e-6);
    }

    /// `f_u f_v = −(f_uv + f_uv⁻¹)` for random generator words.
    #[test]
    fn trace_identity(
        s in surface(),
        t in 0.35f64..0.6,
        th in proptest::collection::vec(-PI..PI, 3),
        letters in proptest::collection::vec((0usize..8, prop_oneof![Just(-1i64), Just(1), Just(2)]), 2..8),
    ) {
        let m = CharVarModel::new(s).unwrap();
        let tau = vec![t; m.dim()];
        let rho = m.represent(&tau, &th[..m.dim()], 0).unwrap();
        let gens: Vec<String> = rho.generators.keys().cloned().collect();
        let word: Vec<(String, i64)> = letters.iter().map(|&(i, k)| (gens[i % gens.len()].clone(), k)).collect();
        let (u, v) = word.split_at(word.len() / 2);
        let inv: Vec<(String, i64)> = v.iter().rev().map(|(g, k)| (g.clone(), -k)).collect();
        let f = |w: Vec<(String, i64)>| rho.trace_function(&CurveWord { components: vec![w] }).unwrap();
        let lhs = f(u.to_vec()) * f(v.to_vec());
        let rhs = -(f([u, v].concat()) + f([u, &inv[..]].concat()));
        prop_assert!((lhs - rhs).abs() < 1e-12 * lhs.abs().max(1.0));
    }

    /// Moments are invariant along every twist flow.
    #[test]
    fn moments_ignore_angles(s in surface(), t in 0.35f64..0.6, th in proptest::collection::vec(-PI..PI, 3)) {
        let m = CharVarModel::new(s).unwrap();
        let tau = vec![t; m.dim()];
        for i in 0..m.dim() {
            let h = m.evaluate(&Observable::Moment(i), &tau, &th[..m.dim()], 0).unwrap();
            prop_assert!((h - t).abs() < 1e-10);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    /// Assembled operators of twisted duals are Hermitian at small levels.
    #[test]
    fn twisted_duals_are_hermitian(s in surface(), n in 1u32..3, m in -2i64..=2) {
        let g = s.graph();
        let r = feasible_level(s, n) + if s == TestSurface::Genus2 { 5 } else { 0 };
        let ctx = OperatorContext::new(&g, r).unwrap();
        let kind = if m == 0 { StandardKind::Dual } else { StandardKind::TwistedDual(m) };
        let op = assemble_operator(&ctx, &standard_curve(&g, kind, g.internal_edges[0]).unwrap()).unwrap();
        let dense = op.to_dense();
        prop_assert!((&dense - dense.adjoint()).norm() < 1e-12 * dense.norm().max(1.0));
    }
}
