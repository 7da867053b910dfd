//! The assembled dual-curve operators reproduce the closed forms `W`, `I`
//! and `J` at every coloring.

use curveops::curves::{standard_curve, StandardKind};
use curveops::fusion::closed_form::{i_coeff, j_coeff, j_down, w};
use curveops::fusion::{assemble_operator, OperatorContext};
use curveops::surface::TestSurface;
use std::f64::consts::PI;

fn odd_near(x: f64) -> u32 {
    let n = x.round() as u32;
    if n % 2 == 1 {
        n
    } else {
        n + 1
    }
}

#[test]
fn loop_dual_matches_w() {
    for r in [20u32, 50, 100, 200] {
        let frac = format!("{}/{}", odd_near(r as f64 / 4.0), r);
        let g = TestSurface::Torus.graph_with_fractions(&[&frac]).unwrap();
        let ctx = OperatorContext::new(&g, r).unwrap();
        let e = g.edge_index("e").unwrap();
        let f = g.edge_index("f").unwrap();
        let op = assemble_operator(&ctx, &standard_curve(&g, StandardKind::Dual, e).unwrap()).unwrap();
        let h = PI / r as f64;
        let mut worst: f64 = 0.0;
        for (i, c) in ctx.colorings.iter().enumerate() {
            let te = PI * c.colors[e] as f64 / r as f64;
            let tf = PI * c.colors[f] as f64 / r as f64;
            for s in [-1i32, 1] {
                let mut k = vec![0; g.num_edges()];
                k[e] = s;
                let got = op.coefficient(i, &k);
                let target = c.colors[e] as i64 + s as i64;
                let admissible = ctx
                    .index_of(&{
                        let mut t = c.colors.clone();
                        t[e] = target.max(0) as u32;
                        t
                    })
                    .is_some();
                let want = if admissible { w(te, tf, s as f64 * h) } else { 0.0 };
                worst = worst.max((got.re - want).abs() / want.abs().max(1.0));
                assert!(got.im.abs() < 1e-12);
            }
        }
        assert!(worst < 1e-10, "r = {r}: worst relative error {worst:e}");
    }
}

#[test]
fn joining_dual_matches_i_and_j() {
    for r in [20u32, 50, 100, 200] {
        let q = odd_near(r as f64 / 4.0);
        let fr: Vec<String> = [q, r / 2, q, r / 2].iter().map(|x| format!("{x}/{r}")).collect();
        let frs: Vec<&str> = fr.iter().map(|s| s.as_str()).collect();
        for (surface, fracs) in [(TestSurface::Sphere4, frs.clone()), (TestSurface::Genus2, vec![])] {
            let g = surface.graph_with_fractions(&fracs).unwrap();
            let ctx = OperatorContext::new(&g, r).unwrap();
            let h = PI / r as f64;
            for &e in &g.internal_edges {
                let [a, b, c, d] = g.joining_neighbours(e).unwrap();
                let op = assemble_operator(&ctx, &standard_curve(&g, StandardKind::Dual, e).unwrap())
                    .unwrap();
                let mut worst: f64 = 0.0;
                for (i, col) in ctx.colorings.iter().enumerate() {
                    let t = |x: usize| PI * col.colors[x] as f64 / r as f64;
                    let tau = [t(a), t(b), t(c), t(d), t(e)];
                    for s in [-2i32, 0, 2] {
                        let mut k = vec![0; g.num_edges()];
                        k[e] = s;
                        let mut tc = col.colors.clone();
                        tc[e] = (tc[e] as i64 + s as i64).max(0) as u32;
                        let admissible = ctx.index_of(&tc).is_some();
                        let want = if !admissible {
                            0.0
                        } else {
                            match s {
                                0 => -i_coeff(&tau, h),
                                2 => -j_coeff(&tau, h),
                                _ => -j_down(&tau, h),
                            }
                        };
                        let got = op.coefficient(i, &k);
                        worst = worst.max((got.re - want).abs() / want.abs().max(1.0));
                        assert!(got.im.abs() < 1e-12);
                    }
                }
                assert!(worst < 1e-10, "{surface} r = {r} edge {e}: worst {worst:e}");
            }
        }
    }
}
