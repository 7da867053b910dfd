//! Banded trivalent graphs compatible with a pants decomposition.
//!
//! A graph is given by its edge-ends ("darts"): every edge owns two ends and
//! every vertex lists its incident ends in counter-clockwise order.  That is
//! the smallest faithful encoding of a ribbon structure; no embedding is ever
//! stored.
//!
//! The closed surface `Σ` carried by the graph is the double of the ribbon
//! thickening `F` of the internal part of the graph, with one marked point per
//! boundary leg.  Its genus is therefore the first Betti number of the internal
//! graph, and every internal edge `e` is the spine of one decomposition curve
//! `C_e`.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, VecDeque};

/// Whether a vertex is a trivalent pants vertex or a univalent marked point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VertexKind {
    /// A trivalent vertex, one per pair of pants.
    Internal,
    /// A univalent vertex sitting on a marked point.
    Boundary,
}

/// One vertex entry of the JSON graph description.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VertexSpec {
    /// Vertex name.
    pub id: String,
    /// Internal or boundary.
    pub kind: VertexKind,
    /// Incident edge-end ids in counter-clockwise order.
    pub cyclic: Vec<String>,
}

/// One edge entry of the JSON graph description.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EdgeSpec {
    /// Edge name.
    pub id: String,
    /// Its two edge-end ids.
    pub ends: Vec<String>,
}

/// Boundary color fraction, written either as a number or as `"p/q"`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Fraction {
    /// A fraction given as a string such as `"1/4"`.
    Text(String),
    /// A fraction given as a decimal number; it must be exactly representable
    /// with a denominator below 10^6.
    Number(f64),
}

impl Fraction {
    /// Parses into a reduced `(numerator, denominator)` pair in `[0, 1]`.
    pub fn parse(&self) -> Result<(u32, u32)> {
        let (p, q) = match self {
            Fraction::Text(s) => {
                let mut it = s.split('/');
                let p: u32 = it
                    .next()
                    .and_then(|x| x.trim().parse().ok())
                    .ok_or_else(|| Error::Graph(format!("bad fraction {s:?}")))?;
                let q: u32 = match it.next() {
                    Some(x) => x
                        .trim()
                        .parse()
                        .map_err(|_| Error::Graph(format!("bad fraction {s:?}")))?,
                    None => 1,
                };
                if it.next().is_some() || q == 0 {
                    return Err(Error::Graph(format!("bad fraction {s:?}")));
                }
                (p, q)
            }
            Fraction::Number(x) => {
                let mut found = None;
                for q in 1..1_000_000u32 {
                    let p = (x * q as f64).round();
                    if (p / q as f64 - x).abs() < 1e-12 {
                        found = Some((p as u32, q));
                        break;
                    }
                }
                found.ok_or_else(|| Error::Graph(format!("fraction {x} is not rational")))?
            }
        };
        if p > q {
            return Err(Error::Graph(format!("fraction {p}/{q} exceeds 1")));
        }
        let g = gcd(p, q);
        Ok((p / g, q / g))
    }
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a.max(1)
    } else {
        gcd(b, a % b)
    }
}

/// Marked point entry: which boundary vertex, and its color fraction `t_i`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MarkedSpec {
    /// Boundary vertex id.
    pub vertex: String,
    /// Color fraction `t_i`; the boundary color at level `r` is `r·t_i`.
    pub color_fraction: Fraction,
}

/// The JSON graph description.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphSpec {
    /// Vertices with their cyclic orders.
    pub vertices: Vec<VertexSpec>,
    /// Edges with their ends.
    pub edges: Vec<EdgeSpec>,
    /// Marked points.
    #[serde(default)]
    pub marked: Vec<MarkedSpec>,
}

/// What an edge connects.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum EdgeKind {
    /// Both ends at the same internal vertex.
    Loop {
        /// The vertex.
        vertex: usize,
    },
    /// Ends at two distinct internal vertices (`v1` owns the first end).
    Joining {
        /// Vertex of the first end.
        v1: usize,
        /// Vertex of the second end.
        v2: usize,
    },
    /// A leg from an internal vertex to a marked point.
    Leg {
        /// The internal vertex.
        vertex: usize,
        /// Index of the marked point (into [`DecoratedGraph::marked`]).
        marked: usize,
    },
}

/// A validated vertex.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Vertex {
    /// Name.
    pub id: String,
    /// Internal or boundary.
    pub kind: VertexKind,
    /// Incident end indices in counter-clockwise order.
    pub cyclic: Vec<usize>,
}

/// A validated edge.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Edge {
    /// Name.
    pub id: String,
    /// End indices `[first, second]`.
    pub ends: [usize; 2],
    /// Connection type.
    pub kind: EdgeKind,
}

/// A validated edge-end.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct End {
    /// Name.
    pub id: String,
    /// Owning edge.
    pub edge: usize,
    /// Vertex it is attached to.
    pub vertex: usize,
    /// Position in the vertex's cyclic order.
    pub slot: usize,
}

/// A marked point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Marked {
    /// Boundary vertex index.
    pub vertex: usize,
    /// The leg edge ending at it.
    pub edge: usize,
    /// Reduced fraction `(p, q)`.
    pub fraction: (u32, u32),
}

/// A validated banded trivalent graph together with the topology of the
/// surface it decorates.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecoratedGraph {
    /// Vertices.
    pub vertices: Vec<Vertex>,
    /// Edges (the fixed edge order used everywhere).
    pub edges: Vec<Edge>,
    /// Edge-ends.
    pub ends: Vec<End>,
    /// Marked points.
    pub marked: Vec<Marked>,
    /// Genus of the closed surface `Σ`.
    pub genus: usize,
    /// Genus of the ribbon thickening `F`.
    pub thickening_genus: usize,
    /// Number of boundary circles of the ribbon thickening `F`.
    pub faces: usize,
    /// Indices of internal edges (loops and joining edges), in edge order.
    pub internal_edges: Vec<usize>,
}

impl DecoratedGraph {
    /// Parses and validates a JSON graph description.
    pub fn from_json(text: &str) -> Result<Self> {
        let spec: GraphSpec =
            serde_json::from_str(text).map_err(|e| Error::Graph(e.to_string()))?;
        build_graph(&spec)
    }

    /// Number of edges (internal and legs).
    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    /// Number of marked points.
    pub fn num_marked(&self) -> usize {
        self.marked.len()
    }

    /// Looks an edge up by name.
    pub fn edge_index(&self, id: &str) -> Result<usize> {
        self.edges
            .iter()
            .position(|e| e.id == id)
            .ok_or_else(|| Error::Graph(format!("unknown edge {id:?}")))
    }

    /// Whether the edge is internal (loop or joining).
    pub fn is_internal(&self, e: usize) -> bool {
        !matches!(self.edges[e].kind, EdgeKind::Leg { .. })
    }

    /// Internal vertices.
    pub fn internal_vertices(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.vertices.len()).filter(|&v| self.vertices[v].kind == VertexKind::Internal)
    }

    /// The three edges at an internal vertex, in cyclic order.
    pub fn vertex_edges(&self, v: usize) -> [usize; 3] {
        let c = &self.vertices[v].cyclic;
        [
            self.ends[c[0]].edge,
            self.ends[c[1]].edge,
            self.ends[c[2]].edge,
        ]
    }

    /// The end following `end` counter-clockwise at its vertex.
    pub fn next_end(&self, end: usize) -> usize {
        let v = &self.vertices[self.ends[end].vertex];
        v.cyclic[(self.ends[end].slot + 1) % v.cyclic.len()]
    }

    /// The other end of the same edge.
    pub fn opposite_end(&self, end: usize) -> usize {
        let e = &self.edges[self.ends[end].edge];
        if e.ends[0] == end {
            e.ends[1]
        } else {
            e.ends[0]
        }
    }

    /// Euler characteristic `V − E` of the graph.
    pub fn euler_characteristic(&self) -> i64 {
        self.vertices.len() as i64 - self.edges.len() as i64
    }

    /// Whether the ribbon thickening is planar (genus zero).
    pub fn is_planar(&self) -> bool {
        self.thickening_genus == 0
    }

    /// Neighbour labels `(a, b, c, d)` of a joining edge `e`: at its first
    /// vertex the counter-clockwise order is `(e, a, d)`, at its second vertex
    /// `(e, c, b)`.
    pub fn joining_neighbours(&self, e: usize) -> Result<[usize; 4]> {
        let edge = &self.edges[e];
        if !matches!(edge.kind, EdgeKind::Joining { .. }) {
            return Err(Error::Graph(format!("edge {} is not a joining edge", edge.id)));
        }
        let x = edge.ends[0];
        let y = edge.ends[1];
        let a = self.ends[self.next_end(x)].edge;
        let d = self.ends[self.next_end(self.next_end(x))].edge;
        let c = self.ends[self.next_end(y)].edge;
        let b = self.ends[self.next_end(self.next_end(y))].edge;
        Ok([a, b, c, d])
    }

    /// The third edge at the vertex of a loop edge.
    pub fn loop_partner(&self, e: usize) -> Result<usize> {
        let edge = &self.edges[e];
        match edge.kind {
            EdgeKind::Loop { vertex } => self
                .vertex_edges(vertex)
                .into_iter()
                .find(|&f| f != e)
                .ok_or_else(|| Error::Graph("degenerate loop vertex".into())),
            _ => Err(Error::Graph(format!("edge {} is not a loop", edge.id))),
        }
    }
}

/// Validates a graph description and computes its topology.
pub fn build_graph(spec: &GraphSpec) -> Result<DecoratedGraph> {
    let mut end_index: BTreeMap<&str, usize> = BTreeMap::new();
    let mut ends: Vec<End> = Vec::new();
    let mut edges: Vec<Edge> = Vec::new();
    for (ei, es) in spec.edges.iter().enumerate() {
        if es.ends.len() != 2 {
            return Err(Error::Graph(format!(
                "edge {:?} must have exactly two ends",
                es.id
            )));
        }
        if spec.edges[..ei].iter().any(|o| o.id == es.id) {
            return Err(Error::Graph(format!("duplicate edge id {:?}", es.id)));
        }
        let mut pair = [0usize; 2];
        for (k, name) in es.ends.iter().enumerate() {
            if end_index.contains_key(name.as_str()) {
                return Err(Error::Graph(format!("edge-end {name:?} used twice")));
            }
            end_index.insert(name, ends.len());
            pair[k] = ends.len();
            ends.push(End {
                id: name.clone(),
                edge: ei,
                vertex: usize::MAX,
                slot: 0,
            });
        }
        edges.push(Edge {
            id: es.id.clone(),
            ends: pair,
            kind: EdgeKind::Loop { vertex: 0 },
        });
    }

    let mut vertices = Vec::new();
    for (vi, vs) in spec.vertices.iter().enumerate() {
        let expected = match vs.kind {
            VertexKind::Internal => 3,
            VertexKind::Boundary => 1,
        };
        if vs.cyclic.len() != expected {
            return Err(Error::Graph(match vs.kind {
                VertexKind::Internal => format!(
                    "internal vertex {:?} is not trivalent ({} ends)",
                    vs.id,
                    vs.cyclic.len()
                ),
                VertexKind::Boundary => format!(
                    "boundary vertex {:?} must have exactly one end",
                    vs.id
                ),
            }));
        }
        let mut cyc = Vec::new();
        for (slot, name) in vs.cyclic.iter().enumerate() {
            if vs.cyclic[..slot].contains(name) {
                return Err(Error::Graph(format!(
                    "ribbon ordering at {:?} is not a 3-cycle (repeats {name:?})",
                    vs.id
                )));
            }
            let &i = end_index
                .get(name.as_str())
                .ok_or_else(|| Error::Graph(format!("dangling edge-end {name:?}")))?;
            if ends[i].vertex != usize::MAX {
                return Err(Error::Graph(format!(
                    "edge-end {name:?} attached to two vertices"
                )));
            }
            ends[i].vertex = vi;
            ends[i].slot = slot;
            cyc.push(i);
        }
        vertices.push(Vertex {
            id: vs.id.clone(),
            kind: vs.kind,
            cyclic: cyc,
        });
    }
    if let Some(e) = ends.iter().find(|e| e.vertex == usize::MAX) {
        return Err(Error::Graph(format!("dangling edge-end {:?}", e.id)));
    }

    let mut marked = Vec::new();
    let mut marked_of_vertex = vec![usize::MAX; vertices.len()];
    for m in &spec.marked {
        let v = vertices
            .iter()
            .position(|x| x.id == m.vertex)
            .ok_or_else(|| Error::Graph(format!("unknown marked vertex {:?}", m.vertex)))?;
        if vertices[v].kind != VertexKind::Boundary {
            return Err(Error::Graph(format!(
                "marked vertex {:?} is not a boundary vertex",
                m.vertex
            )));
        }
        if marked_of_vertex[v] != usize::MAX {
            return Err(Error::Graph(format!("vertex {:?} marked twice", m.vertex)));
        }
        marked_of_vertex[v] = marked.len();
        marked.push(Marked {
            vertex: v,
            edge: ends[vertices[v].cyclic[0]].edge,
            fraction: m.color_fraction.parse()?,
        });
    }

    for (ei, edge) in edges.iter_mut().enumerate() {
        let v1 = ends[edge.ends[0]].vertex;
        let v2 = ends[edge.ends[1]].vertex;
        let k1 = vertices[v1].kind;
        let k2 = vertices[v2].kind;
        edge.kind = match (k1, k2) {
            (VertexKind::Internal, VertexKind::Internal) if v1 == v2 => {
                EdgeKind::Loop { vertex: v1 }
            }
            (VertexKind::Internal, VertexKind::Internal) => EdgeKind::Joining { v1, v2 },
            (VertexKind::Internal, VertexKind::Boundary)
            | (VertexKind::Boundary, VertexKind::Internal) => {
                let (vi, vb) = if k1 == VertexKind::Internal {
                    (v1, v2)
                } else {
                    (v2, v1)
                };
                if marked_of_vertex[vb] == usize::MAX {
                    return Err(Error::Graph(format!(
                        "boundary vertex {:?} carries no marked point",
                        vertices[vb].id
                    )));
                }
                EdgeKind::Leg {
                    vertex: vi,
                    marked: marked_of_vertex[vb],
                }
            }
            _ => {
                return Err(Error::Graph(format!(
                    "edge {} joins two boundary vertices",
                    edges_id(spec, ei)
                )))
            }
        };
    }

    let internal_vertices: Vec<usize> = (0..vertices.len())
        .filter(|&v| vertices[v].kind == VertexKind::Internal)
        .collect();
    if internal_vertices.is_empty() {
        return Err(Error::Graph("graph has no internal vertex".into()));
    }
    let internal_edges: Vec<usize> = (0..edges.len())
        .filter(|&e| !matches!(edges[e].kind, EdgeKind::Leg { .. }))
        .collect();

    // connectivity
    let mut seen = vec![false; vertices.len()];
    let mut queue = VecDeque::from([internal_vertices[0]]);
    seen[internal_vertices[0]] = true;
    while let Some(v) = queue.pop_front() {
        for &end in &vertices[v].cyclic {
            let e = &edges[ends[end].edge];
            for &x in &e.ends {
                let w = ends[x].vertex;
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
    }
    if seen.iter().any(|s| !s) {
        return Err(Error::Graph("graph is not connected".into()));
    }

    let mut g = DecoratedGraph {
        vertices,
        edges,
        ends,
        marked,
        genus: 0,
        thickening_genus: 0,
        faces: 0,
        internal_edges,
    };

    // Faces of the ribbon structure: orbits of "jump to the opposite end,
    // then turn counter-clockwise".
    let mut visited = vec![false; g.ends.len()];
    let mut faces = 0usize;
    for start in 0..g.ends.len() {
        if visited[start] {
            continue;
        }
        faces += 1;
        let mut x = start;
        while !visited[x] {
            visited[x] = true;
            x = g.next_end(g.opposite_end(x));
        }
    }
    let chi = g.euler_characteristic();
    let twice_genus_f = 2 - chi - faces as i64;
    if twice_genus_f < 0 || twice_genus_f % 2 != 0 {
        return Err(Error::Graph(format!(
            "ribbon structure inconsistent: χ = {chi}, {faces} boundary circles"
        )));
    }
    let betti = 1 - (internal_vertices.len() as i64 - g.internal_edges.len() as i64);
    let genus_from_double = twice_genus_f + faces as i64 - 1;
    if betti < 0 || genus_from_double != betti {
        return Err(Error::Graph(format!(
            "Euler count mismatch: Betti number {betti}, doubled thickening genus {genus_from_double}"
        )));
    }
    g.faces = faces;
    g.thickening_genus = (twice_genus_f / 2) as usize;
    g.genus = betti as usize;
    let n = g.marked.len() as i64;
    if g.internal_edges.len() as i64 != 3 * g.genus as i64 - 3 + n {
        return Err(Error::Graph(
            "internal edge count differs from 3g − 3 + n".into(),
        ));
    }
    Ok(g)
}

fn edges_id(spec: &GraphSpec, ei: usize) -> &str {
    &spec.edges[ei].id
}
