//! The three test surfaces used throughout: the once-punctured torus, the
//! four-holed sphere, and the closed genus-2 surface.
//!
//! Conventions frozen here (and relied on by the word tables and the
//! character-variety oracle):
//!
//! * punctured torus: one vertex `v` with counter-clockwise ends
//!   `(e.a, e.b, f.i)`; loop edge `e`, leg `f` to the marked point `p`;
//! * four-holed sphere: vertices `v1 = (e.a, x1.i, x2.i)` and
//!   `v2 = (e.b, x3.i, x4.i)`; joining edge `e`, legs `x1..x4`;
//! * genus two: the theta graph with both vertices ordered `(e1, e2, e3)`,
//!   whose ribbon thickening is a one-holed torus (non-planar).

use super::graph::DecoratedGraph;
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

/// Identifier of a test surface.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TestSurface {
    /// Once-punctured torus (g = 1, n = 1).
    Torus,
    /// Four-holed sphere (g = 0, n = 4).
    Sphere4,
    /// Closed genus-2 surface (g = 2, n = 0).
    Genus2,
}

impl TestSurface {
    /// All three, in a fixed order.
    pub const ALL: [TestSurface; 3] = [TestSurface::Torus, TestSurface::Sphere4, TestSurface::Genus2];

    /// Short name used on the command line and in reports.
    pub fn name(self) -> &'static str {
        match self {
            TestSurface::Torus => "torus",
            TestSurface::Sphere4 => "sphere4",
            TestSurface::Genus2 => "genus2",
        }
    }

    /// Default marked-point fractions.
    pub fn default_fractions(self) -> Vec<&'static str> {
        match self {
            TestSurface::Torus => vec!["1/4"],
            TestSurface::Sphere4 => vec!["1/4", "1/2", "1/4", "1/2"],
            TestSurface::Genus2 => vec![],
        }
    }

    /// The graph with the default marked-point fractions.
    pub fn graph(self) -> DecoratedGraph {
        let f = self.default_fractions();
        self.graph_with_fractions(&f).expect("built-in graph is valid")
    }

    /// The graph with custom marked-point fractions (one per marked point).
    pub fn graph_with_fractions(self, fractions: &[&str]) -> Result<DecoratedGraph> {
        DecoratedGraph::from_json(&self.graph_json(fractions)?)
    }

    /// JSON description with the given fractions.
    pub fn graph_json(self, fractions: &[&str]) -> Result<String> {
        let want = self.default_fractions().len();
        if fractions.len() != want {
            return Err(Error::Graph(format!(
                "{} needs {want} marked fractions, got {}",
                self.name(),
                fractions.len()
            )));
        }
        Ok(match self {
            TestSurface::Torus => format!(
                r#"{{
  "vertices": [
    {{"id": "v", "kind": "internal", "cyclic": ["e.a", "e.b", "f.i"]}},
    {{"id": "p", "kind": "boundary", "cyclic": ["f.o"]}}
  ],
  "edges": [
    {{"id": "e", "ends": ["e.a", "e.b"]}},
    {{"id": "f", "ends": ["f.i", "f.o"]}}
  ],
  "marked": [{{"vertex": "p", "color_fraction": "{}"}}]
}}"#,
                fractions[0]
            ),
            TestSurface::Sphere4 => format!(
                r#"{{
  "vertices": [
    {{"id": "v1", "kind": "internal", "cyclic": ["e.a", "x1.i", "x2.i"]}},
    {{"id": "v2", "kind": "internal", "cyclic": ["e.b", "x3.i", "x4.i"]}},
    {{"id": "p1", "kind": "boundary", "cyclic": ["x1.o"]}},
    {{"id": "p2", "kind": "boundary", "cyclic": ["x2.o"]}},
    {{"id": "p3", "kind": "boundary", "cyclic": ["x3.o"]}},
    {{"id": "p4", "kind": "boundary", "cyclic": ["x4.o"]}}
  ],
  "edges": [
    {{"id": "e", "ends": ["e.a", "e.b"]}},
    {{"id": "x1", "ends": ["x1.i", "x1.o"]}},
    {{"id": "x2", "ends": ["x2.i", "x2.o"]}},
    {{"id": "x3", "ends": ["x3.i", "x3.o"]}},
    {{"id": "x4", "ends": ["x4.i", "x4.o"]}}
  ],
  "marked": [
    {{"vertex": "p1", "color_fraction": "{}"}},
    {{"vertex": "p2", "color_fraction": "{}"}},
    {{"vertex": "p3", "color_fraction": "{}"}},
    {{"vertex": "p4", "color_fraction": "{}"}}
  ]
}}"#,
                fractions[0], fractions[1], fractions[2], fractions[3]
            ),
            TestSurface::Genus2 => r#"{
  "vertices": [
    {"id": "v1", "kind": "internal", "cyclic": ["e1.a", "e2.a", "e3.a"]},
    {"id": "v2", "kind": "internal", "cyclic": ["e1.b", "e2.b", "e3.b"]}
  ],
  "edges": [
    {"id": "e1", "ends": ["e1.a", "e1.b"]},
    {"id": "e2", "ends": ["e2.a", "e2.b"]},
    {"id": "e3", "ends": ["e3.a", "e3.b"]}
  ],
  "marked": []
}"#
            .to_string(),
        })
    }
}

impl fmt::Display for TestSurface {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TestSurface {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "torus" | "punctured-torus" => Ok(TestSurface::Torus),
            "sphere4" | "four-holed-sphere" => Ok(TestSurface::Sphere4),
            "genus2" | "genus-2" => Ok(TestSurface::Genus2),
            _ => Err(Error::Usage(format!(
                "unknown surface {s:?} (expected torus, sphere4 or genus2)"
            ))),
        }
    }
}
