//! ψ-symbol sampling, extrapolation and the first-order identities on small
//! level sweeps.

use curveops::charvar::{CharVarModel, Observable};
use curveops::coloring::RealColoring;
use curveops::curves::{curve_word, standard_curve, StandardKind};
use curveops::fusion::{assemble_operator, OperatorContext};
use curveops::harness::{default_levels, Suite};
use curveops::surface::TestSurface;
use curveops::symbol::{
    composite_check, extrapolate, extrapolate_with, first_order_check, symbol_from_operator,
    write_convergence_csv, SymbolSampler,
};
use curveops::Error;
use std::f64::consts::PI;

fn tau(surface: TestSurface) -> Vec<f64> {
    match surface {
        TestSurface::Genus2 => vec![0.3, 0.4, 0.4],
        _ => vec![0.4],
    }
}

/// The decomposition curve is diagonal with `F_0 = −2cos(πc/r)`, so its
/// principal symbol is `−2cos(πτ_e)` with no other coefficients.
#[test]
fn decomposition_symbol_is_minus_two_cos() {
    for surface in TestSurface::ALL {
        let g = surface.graph();
        let levels = default_levels(surface, Suite::V5);
        let t = tau(surface);
        for (i, &e) in g.internal_edges.iter().enumerate() {
            let c = standard_curve(&g, StandardKind::Decomposition, e).unwrap();
            let sym = SymbolSampler::new(&g, &c).sweep(&levels, &t).unwrap();
            assert_eq!(sym.max_terms(), 1);
            let fit = extrapolate(&sym).unwrap();
            assert_eq!(fit.terms.len(), 1);
            let want = -2.0 * (PI * t[i]).cos();
            assert!((fit.terms[0].f0.re - want).abs() < 1e-9, "{surface}");
            assert!(fit.terms[0].f0.im.abs() < 1e-12);
        }
    }
}

/// The row-based sampler and the assembled operator give the same sample.
#[test]
fn sampler_agrees_with_assembled_operator() {
    for surface in TestSurface::ALL {
        let g = surface.graph();
        let r = match surface {
            TestSurface::Torus => 44,
            TestSurface::Sphere4 => 40,
            TestSurface::Genus2 => 20,
        };
        let t = tau(surface);
        let d = standard_curve(&g, StandardKind::TwistedDual(1), g.internal_edges[0]).unwrap();
        let op = assemble_operator(&OperatorContext::new(&g, r).unwrap(), &d).unwrap();
        let from_op = symbol_from_operator(&op, &g, &RealColoring::from_internal(&g, &t).unwrap()).unwrap();
        let from_rows = SymbolSampler::new(&g, &d).sample(r, &t).unwrap();
        assert_eq!(from_op.anchor, from_rows.anchor, "{surface}");
        assert_eq!(from_op.terms.len(), from_rows.terms.len(), "{surface}");
        for (a, b) in from_op.terms.iter().zip(&from_rows.terms) {
            assert_eq!(a.k, b.k);
            assert!((a.value - b.value).norm() < 1e-12, "{surface} k={:?}", a.k);
        }
    }
}

/// The extrapolated principal symbol of the dual curve equals the trace
/// function on the character variety, for every character.
#[test]
fn dual_principal_symbol_is_trace_function() {
    for surface in [TestSurface::Torus, TestSurface::Sphere4] {
        let g = surface.graph();
        let m = CharVarModel::new(surface).unwrap();
        let levels = default_levels(surface, Suite::V6);
        let d = standard_curve(&g, StandardKind::Dual, g.internal_edges[0]).unwrap();
        let obs = Observable::Trace(curve_word(surface, &g, &d).unwrap());
        let t = tau(surface);
        let sym = SymbolSampler::new(&g, &d).sweep(&levels, &t).unwrap();
        let fit = extrapolate_with(&sym, 4).unwrap();
        for theta in [-2.0, -0.7, 0.0, 1.1, 2.9] {
            for (chi, character) in m.characters.iter().enumerate() {
                let f = m.evaluate(&obs, &t, &[theta], chi).unwrap();
                let s = fit.principal_component(character, &[theta]);
                assert!((s.re - f).abs() < 1e-6, "{surface} θ={theta}: {} vs {f}", s.re);
                assert!(s.im.abs() < 1e-6);
            }
        }
    }
}

/// `F¹ = Δ_γ` up to the fit bound, with a second-order remainder.
#[test]
fn first_order_identity_holds_for_dual_curves() {
    for surface in TestSurface::ALL {
        let g = surface.graph();
        let levels = default_levels(surface, Suite::V5);
        let d = standard_curve(&g, StandardKind::Dual, g.internal_edges[0]).unwrap();
        let sym = SymbolSampler::new(&g, &d).sweep(&levels, &tau(surface)).unwrap();
        let fit = extrapolate(&sym).unwrap();
        let rep = first_order_check(&sym, &fit).unwrap();
        assert!(rep.default_norm <= 5.0 * rep.bound, "{surface}: {} vs {}", rep.default_norm, rep.bound);
        let slope = rep.slope.expect("dual curves have a non-trivial remainder");
        assert!((slope - 2.0).abs() < 0.3, "{surface}: slope {slope}");
    }
}

#[test]
fn decomposition_curve_is_exact_to_first_order() {
    let g = TestSurface::Sphere4.graph();
    let levels = default_levels(TestSurface::Sphere4, Suite::V5);
    let c = standard_curve(&g, StandardKind::Decomposition, g.internal_edges[0]).unwrap();
    let sym = SymbolSampler::new(&g, &c).sweep(&levels, &[0.4]).unwrap();
    let rep = first_order_check(&sym, &extrapolate(&sym).unwrap()).unwrap();
    assert!(rep.exact());
}

/// The product formula holds with bracket constant one.
#[test]
fn composite_bracket_constant_is_one() {
    let surface = TestSurface::Torus;
    let g = surface.graph();
    let e = g.internal_edges[0];
    let c = standard_curve(&g, StandardKind::Decomposition, e).unwrap();
    let d = standard_curve(&g, StandardKind::Dual, e).unwrap();
    let rep = composite_check(&g, &c, &d, &[0.4], &default_levels(surface, Suite::V7)).unwrap();
    let kappa = rep.kappa.expect("C·D has a non-zero bracket");
    assert!((kappa - 1.0).abs() < 0.05, "κ = {kappa}");
}

#[test]
fn too_few_levels_is_a_fit_error() {
    let g = TestSurface::Torus.graph();
    let d = standard_curve(&g, StandardKind::Dual, g.internal_edges[0]).unwrap();
    let sym = SymbolSampler::new(&g, &d).sweep(&[100, 140], &[0.3]).unwrap();
    assert!(matches!(extrapolate(&sym), Err(Error::Fit(_))));
}

#[test]
fn convergence_csv_has_one_row_per_level() {
    let mut buf = Vec::new();
    write_convergence_csv(&mut buf, &[100, 200], &[1e-4, 2.5e-5]).unwrap();
    let text = String::from_utf8(buf).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "r,hbar,residual");
    assert_eq!(lines.len(), 3);
    assert!(lines[1].starts_with("100,"));
}
