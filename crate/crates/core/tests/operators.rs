//! Structural properties of assembled curve operators at small levels.

use curveops::curves::{apply_dehn_twist, standard_curve, StandardKind};
use curveops::fusion::{assemble_operator, compose, CurveOperator, OperatorContext};
use curveops::surface::TestSurface;
use nalgebra::DMatrix;
use num_complex::Complex64;
use std::f64::consts::PI;

fn level(surface: TestSurface) -> u32 {
    match surface {
        TestSurface::Torus => 20,
        _ => 16,
    }
}

fn sorted_spectrum(op: &CurveOperator) -> Vec<f64> {
    let m: DMatrix<Complex64> = op.to_dense();
    let mut ev: Vec<f64> = m.symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(|a, b| a.partial_cmp(b).unwrap());
    ev
}

/// `C_e` and `D_e` are exchanged by a mapping class, which acts unitarily on
/// the TQFT space; their operators must therefore be isospectral, with the
/// explicit eigenvalues `−2cos(πc_e/r)` of the decomposition curve.
#[test]
fn dual_curve_is_isospectral_to_decomposition_curve() {
    for surface in TestSurface::ALL {
        let g = surface.graph();
        let r = level(surface);
        let ctx = OperatorContext::new(&g, r).unwrap();
        let e = g.internal_edges[0];
        let c = assemble_operator(&ctx, &standard_curve(&g, StandardKind::Decomposition, e).unwrap()).unwrap();
        let d = assemble_operator(&ctx, &standard_curve(&g, StandardKind::Dual, e).unwrap()).unwrap();
        let mut explicit: Vec<f64> = c
            .colorings
            .iter()
            .map(|col| -2.0 * (PI * col.colors[e] as f64 / r as f64).cos())
            .collect();
        explicit.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let sc = sorted_spectrum(&c);
        let sd = sorted_spectrum(&d);
        for ((x, y), z) in sc.iter().zip(&sd).zip(&explicit) {
            assert!((x - z).abs() < 1e-10, "{surface}: C spectrum {x} vs {z}");
            assert!((y - z).abs() < 1e-9, "{surface}: D spectrum {y} vs {z}");
        }
    }
}

/// A Dehn twist along `C_e` is a unitary commuting with `T^{C_e}`; twisted
/// duals are isospectral to the dual curve.
#[test]
fn twisted_duals_are_isospectral() {
    for surface in TestSurface::ALL {
        let g = surface.graph();
        let ctx = OperatorContext::new(&g, level(surface)).unwrap();
        let e = g.internal_edges[0];
        let d = sorted_spectrum(&assemble_operator(&ctx, &standard_curve(&g, StandardKind::Dual, e).unwrap()).unwrap());
        for m in [-2, -1, 1, 2] {
            let t = standard_curve(&g, StandardKind::TwistedDual(m), e).unwrap();
            let st = sorted_spectrum(&assemble_operator(&ctx, &t).unwrap());
            for (x, y) in d.iter().zip(&st) {
                assert!((x - y).abs() < 1e-9, "{surface} twist {m}: {x} vs {y}");
            }
        }
    }
}

#[test]
fn dehn_twist_of_dual_matches_standard_twisted_dual() {
    for surface in TestSurface::ALL {
        let g = surface.graph();
        let e = g.internal_edges[0];
        let d = standard_curve(&g, StandardKind::Dual, e).unwrap();
        for m in [-1i64, 1, 2] {
            let twisted = apply_dehn_twist(&d, e, m);
            let standard = standard_curve(&g, StandardKind::TwistedDual(m), e).unwrap();
            assert_eq!(twisted.intersections, standard.intersections);
            assert_eq!(twisted.annuli, standard.annuli);
        }
    }
}

/// Disjoint curves commute: `[T^{C_e}, T^{C_f}] = 0`.
#[test]
fn disjoint_curves_commute() {
    let g = TestSurface::Genus2.graph();
    let ctx = OperatorContext::new(&g, 8).unwrap();
    let ops: Vec<CurveOperator> = g
        .internal_edges
        .iter()
        .map(|&e| assemble_operator(&ctx, &standard_curve(&g, StandardKind::Decomposition, e).unwrap()).unwrap())
        .collect();
    for a in &ops {
        for b in &ops {
            let ab = compose(a, b).unwrap().to_dense();
            let ba = compose(b, a).unwrap().to_dense();
            assert!((ab - ba).norm() < 1e-12);
        }
    }
}

/// `C_e` and `D_e` meet, so their operators do not commute.
#[test]
fn intersecting_curves_do_not_commute() {
    for surface in TestSurface::ALL {
        let g = surface.graph();
        let ctx = OperatorContext::new(&g, level(surface)).unwrap();
        let e = g.internal_edges[0];
        let c = assemble_operator(&ctx, &standard_curve(&g, StandardKind::Decomposition, e).unwrap()).unwrap();
        let d = assemble_operator(&ctx, &standard_curve(&g, StandardKind::Dual, e).unwrap()).unwrap();
        let cd = compose(&c, &d).unwrap().to_dense();
        let dc = compose(&d, &c).unwrap().to_dense();
        assert!((cd - dc).norm() > 1e-3, "{surface}");
    }
}

#[test]
fn dense_form_is_hermitian() {
    for surface in TestSurface::ALL {
        let g = surface.graph();
        let ctx = OperatorContext::new(&g, level(surface)).unwrap();
        for kind in [StandardKind::Dual, StandardKind::TwistedDual(1)] {
            let op = assemble_operator(&ctx, &standard_curve(&g, kind, g.internal_edges[0]).unwrap()).unwrap();
            let m = op.to_dense();
            assert!((&m - m.adjoint()).norm() < 1e-12 * m.norm().max(1.0), "{surface}");
        }
    }
}

#[test]
fn spectral_norm_matches_dense_eigenvalues() {
    for surface in TestSurface::ALL {
        let g = surface.graph();
        let ctx = OperatorContext::new(&g, level(surface)).unwrap();
        let gamma = standard_curve(&g, StandardKind::TwistedDual(-1), g.internal_edges[0]).unwrap();
        let op = assemble_operator(&ctx, &gamma).unwrap();
        let dense = sorted_spectrum(&op).iter().fold(0.0f64, |a, x| a.max(x.abs()));
        assert!((op.spectral_norm().unwrap() - dense).abs() < 1e-9, "{surface}");
    }
}

#[test]
fn export_round_trips_through_json() {
    let g = TestSurface::Sphere4.graph();
    let ctx = OperatorContext::new(&g, 12).unwrap();
    let op = assemble_operator(&ctx, &standard_curve(&g, StandardKind::Dual, g.internal_edges[0]).unwrap()).unwrap();
    let mut buf = Vec::new();
    op.write_json(&g, &mut buf).unwrap();
    let v: serde_json::Value = serde_json::from_slice(&buf).unwrap();
    assert_eq!(v["manifest"]["dimension"].as_u64().unwrap() as usize, op.dim());
    assert_eq!(v["entries"].as_array().unwrap().len(), op.nnz());
    let mut csv = Vec::new();
    op.write_csv(&mut csv).unwrap();
    assert_eq!(String::from_utf8(csv).unwrap().lines().count(), op.nnz() + 1);
}
