//! The character-variety oracle: relations, trace functions, the twist flow
//! and the Poisson structure.

use curveops::charvar::{goldman_single_crossing, pants_rep, CharVarModel, Observable};
use curveops::curves::{curve_word, standard_curve, StandardKind};
use curveops::surface::TestSurface;
use std::f64::consts::PI;

fn tau(surface: TestSurface) -> Vec<f64> {
    match surface {
        TestSurface::Genus2 => vec![0.45, 0.5, 0.55],
        _ => vec![0.35],
    }
}

fn theta(n: usize) -> Vec<f64> {
    (0..n).map(|i| 0.4 - 0.9 * i as f64).collect()
}

#[test]
fn pants_representation_has_prescribed_traces() {
    for (a, b, c) in [(0.3, 0.4, 0.5), (0.5, 0.5, 0.5), (0.45, 0.6, 0.35)] {
        let [x, y, z] = pants_rep(a, b, c).unwrap();
        assert!((x.trace() - 2.0 * (PI * a).cos()).abs() < 1e-12);
        assert!((y.trace() - 2.0 * (PI * b).cos()).abs() < 1e-12);
        assert!((z.trace() - 2.0 * (PI * c).cos()).abs() < 1e-12);
        assert!(((x * y * z).dist(curveops::charvar::Quat::new(1.0, 0.0, 0.0, 0.0))) < 1e-12);
    }
    assert!(pants_rep(0.1, 0.1, 0.9).is_err());
}

#[test]
fn representations_satisfy_relations_for_every_character() {
    for surface in TestSurface::ALL {
        let m = CharVarModel::new(surface).unwrap();
        for chi in 0..m.characters.len() {
            let rho = m.represent(&tau(surface), &theta(m.dim()), chi).unwrap();
            assert!(rho.relation_residual(&m.boundary).unwrap() < 1e-10, "{surface} χ={chi}");
        }
    }
}

/// The moment map of edge `e` returns `τ_e` and does not depend on `θ`.
#[test]
fn moment_map_recovers_actions() {
    for surface in TestSurface::ALL {
        let m = CharVarModel::new(surface).unwrap();
        let t = tau(surface);
        for i in 0..m.dim() {
            for th in [theta(m.dim()), vec![1.3; m.dim()]] {
                let h = m.evaluate(&Observable::Moment(i), &t, &th, 0).unwrap();
                assert!((h - t[i]).abs() < 1e-10, "{surface} edge {i}: {h}");
            }
        }
    }
}

/// The exact twist derivative agrees with central differences.
#[test]
fn twist_derivative_matches_finite_differences() {
    for surface in TestSurface::ALL {
        let m = CharVarModel::new(surface).unwrap();
        let g = &m.graph;
        let t = tau(surface);
        let th = theta(m.dim());
        let h = 1e-5;
        for (i, &e) in g.internal_edges.iter().enumerate() {
            let d = standard_curve(g, StandardKind::TwistedDual(1), e).unwrap();
            let w = curve_word(surface, g, &d).unwrap();
            let obs = Observable::Trace(w.clone());
            let exact = m.twist_derivative(&w, &t, &th, 0, i).unwrap();
            let (_, fd) = m.gradient(&obs, &t, &th, 0, h).unwrap();
            assert!((exact - fd[i]).abs() < 1e-7, "{surface} edge {i}: {exact} vs {}", fd[i]);
        }
    }
}

/// Trace functions of dual curves are `2π`-periodic in their angle.
#[test]
fn trace_functions_are_periodic_in_angles() {
    for surface in TestSurface::ALL {
        let m = CharVarModel::new(surface).unwrap();
        let g = &m.graph;
        let t = tau(surface);
        let th = theta(m.dim());
        let d = standard_curve(g, StandardKind::Dual, g.internal_edges[0]).unwrap();
        let obs = Observable::Trace(curve_word(surface, g, &d).unwrap());
        let mut shifted = th.clone();
        shifted[0] += 2.0 * PI;
        let a = m.evaluate(&obs, &t, &th, 0).unwrap();
        let b = m.evaluate(&obs, &t, &shifted, 0).unwrap();
        assert!((a - b).abs() < 1e-10, "{surface}");
    }
}

/// Moments of different edges Poisson-commute, and `{h_e, f_{C_e}} = 0`.
#[test]
fn moments_poisson_commute() {
    let m = CharVarModel::new(TestSurface::Genus2).unwrap();
    let t = tau(TestSurface::Genus2);
    let th = theta(3);
    for i in 0..3 {
        for j in 0..3 {
            let b = m
                .poisson_bracket(&Observable::Moment(i), &Observable::Moment(j), &t, &th, 0, 1e-5)
                .unwrap();
            assert!(b.abs() < 1e-8, "({i}, {j}): {b}");
        }
    }
}

/// The action–angle bracket of the torus curves `C` and `D` is a constant
/// multiple of Goldman's single-crossing bracket.
#[test]
fn torus_bracket_is_proportional_to_goldman() {
    let surface = TestSurface::Torus;
    let m = CharVarModel::new(surface).unwrap();
    let g = &m.graph;
    let e = g.internal_edges[0];
    let wc = curve_word(surface, g, &standard_curve(g, StandardKind::Decomposition, e).unwrap()).unwrap();
    let wd = curve_word(surface, g, &standard_curve(g, StandardKind::Dual, e).unwrap()).unwrap();
    let (fc, fd) = (Observable::Trace(wc.clone()), Observable::Trace(wd.clone()));
    let mut ratios = Vec::new();
    for (t, th) in [(0.3, 0.4), (0.45, -1.2), (0.6, 2.0), (0.7, 0.9)] {
        let pb = m.poisson_bracket(&fc, &fd, &[t], &[th], 0, 1e-5).unwrap();
        let rho = m.represent(&[t], &[th], 0).unwrap();
        let gb = goldman_single_crossing(&rho, &wc.components[0], &wd.components[0]).unwrap();
        ratios.push(pb / gb);
    }
    for r in &ratios {
        assert!((r - ratios[0]).abs() < 1e-5 * ratios[0].abs(), "{ratios:?}");
    }
    assert!((ratios[0].abs() - 2.0 * PI).abs() < 1e-4, "{}", ratios[0]);
}
