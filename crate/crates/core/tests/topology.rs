//! Graphs, homology, colorings and multicurves of the three test surfaces.

use curveops::coloring::{
    anchor_coloring, enumerate_colorings, is_admissible, norm_sq, AdmissibleColoring, Level,
    RealColoring,
};
use curveops::curves::{curve_word, parse_curve, standard_curve, StandardKind};
use curveops::surface::{
    characters, cycle_intersection, rel_h1_basis, DecoratedGraph, RelH1Class, TestSurface,
};
use curveops::Error;

#[test]
fn test_surfaces_have_expected_topology() {
    // (internal edges, genus of the closed surface, planar thickening)
    let expected = [
        (TestSurface::Torus, 1, 1, true),
        (TestSurface::Sphere4, 1, 0, true),
        (TestSurface::Genus2, 3, 2, false),
    ];
    for (surface, internal, genus, planar) in expected {
        let g = surface.graph();
        assert_eq!(g.internal_edges.len(), internal, "{surface}");
        assert_eq!(rel_h1_basis(&g).dim(), genus, "{surface}");
        assert_eq!(g.is_planar(), planar, "{surface}");
    }
}

#[test]
fn intersection_form_is_alternating() {
    for surface in TestSurface::ALL {
        let b = rel_h1_basis(&surface.graph());
        let n = b.dim();
        for i in 0..n {
            assert_eq!(b.intersection[i][i], 0);
            for j in 0..n {
                assert_eq!(b.intersection[i][j], b.intersection[j][i]);
            }
        }
        // A planar thickening has a vanishing form; otherwise every basis
        // class pairs non-trivially with some class.
        let g = surface.graph();
        for i in 0..n {
            let paired = (0..n).any(|j| b.intersection[i][j] == 1);
            assert_eq!(paired, !g.is_planar(), "{surface}");
        }
    }
}

#[test]
fn cycle_intersection_is_symmetric() {
    let g = TestSurface::Genus2.graph();
    let b = rel_h1_basis(&g);
    for x in &b.cycles {
        for y in &b.cycles {
            assert_eq!(cycle_intersection(&g, x, y), cycle_intersection(&g, y, x));
        }
    }
}

/// Characters are exactly the quadratic refinements of the intersection form:
/// `q(a + b) = q(a) + q(b) + ⟨a, b⟩`.
#[test]
fn characters_refine_the_intersection_form() {
    for surface in TestSurface::ALL {
        let b = rel_h1_basis(&surface.graph());
        let chars = characters(&b);
        assert_eq!(chars.len(), 1 << b.dim());
        for chi in &chars {
            for x in 0..(1u64 << b.dim()) {
                for y in 0..(1u64 << b.dim()) {
                    let (a, c) = (RelH1Class(x), RelH1Class(y));
                    assert_eq!(chi.q(a.add(c)), chi.q(a) ^ chi.q(c) ^ b.pairing(a, c));
                }
            }
        }
    }
}

#[test]
fn graph_json_round_trips() {
    for surface in TestSurface::ALL {
        let text = surface.graph_json(&surface.default_fractions()).unwrap();
        let g = DecoratedGraph::from_json(&text).unwrap();
        assert_eq!(g.num_edges(), surface.graph().num_edges());
    }
}

#[test]
fn malformed_graphs_are_rejected() {
    assert!(matches!(DecoratedGraph::from_json("{"), Err(_)));
    // A vertex with two ends is not trivalent.
    let bad = r#"{"vertices":[{"id":"v","kind":"internal","cyclic":["e.a","e.b"]}],
                  "edges":[{"id":"e","ends":["e.a","e.b"]}]}"#;
    assert!(DecoratedGraph::from_json(bad).is_err());
    assert!(TestSurface::Torus.graph_with_fractions(&["1/4", "1/2"]).is_err());
    assert!(TestSurface::Torus.graph_with_fractions(&["5/4"]).is_err());
}

#[test]
fn level_requires_divisibility() {
    let g = TestSurface::Torus.graph();
    assert!(matches!(Level::new(&g, 10), Err(Error::Level(_))));
    assert!(matches!(Level::new(&g, 2), Err(Error::Level(_))));
    assert_eq!(Level::new(&g, 12).unwrap().boundary, vec![3]);
}

/// Brute force over every assignment of colors, with the admissibility
/// conditions written out in strand numbers `i = c − 1`.
fn brute_force(g: &DecoratedGraph, level: &Level) -> Vec<Vec<u32>> {
    let r = level.r;
    let n = g.internal_edges.len() as u32;
    let mut out = Vec::new();
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
            let (i, j, k) = (colors[x] as i64 - 1, colors[y] as i64 - 1, colors[z] as i64 - 1);
            (i + j + k) % 2 == 0 && i <= j + k && j <= i + k && k <= i + j && i + j + k <= 2 * (r as i64 - 2)
        });
        if ok {
            out.push(colors.clone());
        }
    }
    out.sort();
    out
}

#[test]
fn enumeration_matches_brute_force() {
    for (surface, levels) in [
        (TestSurface::Torus, vec![4, 12, 20]),
        (TestSurface::Sphere4, vec![4, 8, 12]),
        (TestSurface::Genus2, vec![3, 4, 5, 6, 7, 8, 9]),
    ] {
        let g = surface.graph();
        for r in levels {
            let level = Level::new(&g, r).unwrap();
            let mut fast: Vec<Vec<u32>> =
                enumerate_colorings(&g, &level).into_iter().map(|c| c.colors).collect();
            fast.sort();
            assert_eq!(fast, brute_force(&g, &level), "{surface} r={r}");
        }
    }
}

/// The number of admissible colorings of the closed genus-2 theta graph is
/// the Verlinde dimension `Σ_{j=1}^{r−1} (r / (2 sin²(πj/r)))`.
#[test]
fn genus_two_dimension_matches_verlinde_formula() {
    let g = TestSurface::Genus2.graph();
    for r in 3..=12u32 {
        let level = Level::new(&g, r).unwrap();
        let n = enumerate_colorings(&g, &level).len() as f64;
        let verlinde: f64 = (1..r)
            .map(|j| {
                let s = (std::f64::consts::PI * j as f64 / r as f64).sin();
                r as f64 / (2.0 * s * s)
            })
            .sum();
        assert!((n - verlinde).abs() < 1e-6, "r={r}: {n} vs {verlinde}");
    }
}

#[test]
fn norms_are_positive_and_inadmissible_colorings_rejected() {
    let g = TestSurface::Sphere4.graph();
    let level = Level::new(&g, 12).unwrap();
    for c in enumerate_colorings(&g, &level) {
        assert!(is_admissible(&c, &g, &level));
        assert!(norm_sq(&c, &g, &level).unwrap() > 0.0);
    }
    let mut bad = enumerate_colorings(&g, &level)[0].colors.clone();
    bad[g.internal_edges[0]] += 1;
    assert!(norm_sq(&AdmissibleColoring::new(bad), &g, &level).is_err());
}

#[test]
fn anchor_is_nearest_admissible_coloring() {
    let g = TestSurface::Genus2.graph();
    let level = Level::new(&g, 40).unwrap();
    let tau = RealColoring::from_internal(&g, &[0.3, 0.4, 0.4]).unwrap();
    let a = anchor_coloring(&g, &level, &tau, 2).unwrap();
    assert!(is_admissible(&a, &g, &level));
    for (&e, want) in g.internal_edges.iter().zip([12.0, 16.0, 16.0]) {
        assert!((a.colors[e] as f64 - want).abs() <= 1.0);
    }
    let outside = RealColoring::from_internal(&g, &[0.9, 0.1, 0.1]).unwrap();
    assert!(!outside.in_domain(&g));
}

#[test]
fn standard_curves_have_expected_intersections() {
    for (surface, dual_i) in [
        (TestSurface::Torus, 1),
        (TestSurface::Sphere4, 2),
        (TestSurface::Genus2, 2),
    ] {
        let g = surface.graph();
        for &e in &g.internal_edges {
            let c = standard_curve(&g, StandardKind::Decomposition, e).unwrap();
            assert!(c.intersections.iter().all(|&i| i == 0));
            let d = standard_curve(&g, StandardKind::Dual, e).unwrap();
            assert_eq!(d.intersections[e], dual_i, "{surface}");
            assert_eq!(d.total_intersection(), dual_i, "{surface}");
            let d2 = d.power(2, &g).unwrap();
            assert_eq!(d2.intersections[e], 2 * dual_i);
            assert_eq!(d2.n_components, 2);
        }
    }
}

#[test]
fn curve_identifiers_parse_and_label() {
    let g = TestSurface::Genus2.graph();
    for text in ["C_e1", "D_e2", "tw1(D_e3)", "tw-2(D_e1)", "2*C_e1", "C_e1+D_e2"] {
        let c = parse_curve(&g, text).unwrap();
        assert!(c.n_components >= 1, "{text}");
        assert_eq!(parse_curve(&g, &c.label(&g)).unwrap(), c, "{text}");
    }
    for bad in ["", "E_e1", "D_e9", "tw(D_e1)", "0*C_e1"] {
        assert!(parse_curve(&g, bad).is_err(), "{bad:?}");
    }
}

#[test]
fn every_library_curve_has_a_word() {
    for surface in TestSurface::ALL {
        let g = surface.graph();
        for &e in &g.internal_edges {
            for kind in [
                StandardKind::Decomposition,
                StandardKind::Dual,
                StandardKind::TwistedDual(1),
                StandardKind::TwistedDual(-1),
            ] {
                let c = standard_curve(&g, kind, e).unwrap();
                let w = curve_word(surface, &g, &c).unwrap();
                assert_eq!(w.components.len(), 1);
            }
        }
    }
}
