//! Multicurves in Dehn position relative to the pants decomposition.
//!
//! A multicurve is recorded by its local pieces: in every pair of pants the
//! numbers of arcs joining each pair of boundary circles (plus arcs returning
//! to the boundary they left, which the dual curves of joining edges need),
//! and in every annulus around a decomposition curve the configuration
//! (crossing arcs, twisted crossing arcs, or parallel cores) with its
//! multiplicity and twist.  Besides this data each multicurve carries its
//! traversal counts of the hexagon cells `C′_e`, `C″_e`, from which the sign
//! cocycle and the projected homology class are read.
//!
//! Operators are only produced for the supported library: decomposition
//! curves `C_e`, dual curves `D_e`, their Dehn twists along `C_e`, and
//! disjoint unions and parallel powers of these.  Raw Dehn data is accepted
//! and validated, but asking for its operator is a capability error unless it
//! coincides with a library curve.

use crate::error::{Error, Result};
use crate::surface::graph::{DecoratedGraph, EdgeKind};
use crate::surface::standard::TestSurface;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;

/// The shape of one connected component of a library multicurve.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ComponentKind {
    /// The decomposition curve `C_e` around edge `e`.
    Decomposition(usize),
    /// The dual curve `D_e`, Dehn-twisted `twist` times along `C_e`.
    Dual {
        /// The edge.
        edge: usize,
        /// Number of Dehn twists along `C_e` (signed).
        twist: i64,
    },
}

/// Which standard curve to build.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum StandardKind {
    /// `C_e`.
    Decomposition,
    /// `D_e`.
    Dual,
    /// `τ_{C_e}^m(D_e)`.
    TwistedDual(i64),
}

/// Arc counts inside one pair of pants whose boundary circles follow the
/// cyclic order `(a, b, c)` of the vertex.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PantsArcs {
    /// Arcs from `C_b` to `C_c`.
    pub alpha: u32,
    /// Arcs from `C_a` to `C_c`.
    pub beta: u32,
    /// Arcs from `C_a` to `C_b`.
    pub gamma: u32,
    /// Arcs leaving and returning to the same boundary circle, per slot.
    #[serde(default, rename = "self")]
    pub self_arcs: [u32; 3],
}

impl PantsArcs {
    /// Number of arc endpoints on the boundary circle in `slot`.
    pub fn endpoints(&self, slot: usize) -> u32 {
        let own = 2 * self.self_arcs[slot];
        own + match slot {
            0 => self.beta + self.gamma,
            1 => self.alpha + self.gamma,
            _ => self.alpha + self.beta,
        }
    }

    fn add(&mut self, o: &PantsArcs) {
        self.alpha += o.alpha;
        self.beta += o.beta;
        self.gamma += o.gamma;
        for i in 0..3 {
            self.self_arcs[i] += o.self_arcs[i];
        }
    }

    fn is_empty(&self) -> bool {
        self.alpha + self.beta + self.gamma + self.self_arcs.iter().sum::<u32>() == 0
    }
}

/// Annulus configuration around a decomposition curve.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnnulusData {
    /// 1: arcs crossing straight, 2: arcs crossing with a twist, 3: cores.
    pub pattern: u8,
    /// Multiplicity (arcs for patterns 1–2, parallel cores for pattern 3).
    pub count: u32,
    /// Signed number of Dehn twists applied to the crossing arcs.
    #[serde(default)]
    pub twist: i64,
}

/// JSON form of raw Dehn data.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveJson {
    /// Arc counts keyed by internal vertex id.
    #[serde(default)]
    pub pants: BTreeMap<String, PantsArcs>,
    /// Annulus data keyed by edge id.
    #[serde(default)]
    pub annuli: BTreeMap<String, AnnulusData>,
    /// Optional traversal counts `(C′_e, C″_e)` keyed by edge id.
    #[serde(default)]
    pub crossings: BTreeMap<String, [u32; 2]>,
}

/// A multicurve in Dehn position.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MulticurveSpec {
    /// Library components (empty for raw data).
    pub components: Vec<ComponentKind>,
    /// Pants arc counts per internal vertex index.
    pub pants: BTreeMap<usize, PantsArcs>,
    /// Annulus data per edge index.
    pub annuli: BTreeMap<usize, AnnulusData>,
    /// Intersection numbers `I_e = #(γ ∩ C_e)` over all edges.
    pub intersections: Vec<u32>,
    /// Traversal counts `(C′_e, C″_e)` over all edges.
    pub crossings: Vec<[u32; 2]>,
    /// Number of connected components `n(γ)` (zero when raw data was not
    /// recognized as a library curve).
    pub n_components: usize,
}

impl fmt::Display for ComponentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ComponentKind::Decomposition(e) => write!(f, "C[{e}]"),
            ComponentKind::Dual { edge, twist: 0 } => write!(f, "D[{edge}]"),
            ComponentKind::Dual { edge, twist } => write!(f, "T{twist}D[{edge}]"),
        }
    }
}

impl MulticurveSpec {
    fn empty(g: &DecoratedGraph) -> Self {
        MulticurveSpec {
            components: Vec::new(),
            pants: BTreeMap::new(),
            annuli: BTreeMap::new(),
            intersections: vec![0; g.num_edges()],
            crossings: vec![[0, 0]; g.num_edges()],
            n_components: 0,
        }
    }

    /// Builds a multicurve from raw Dehn data (validated).
    pub fn from_json(g: &DecoratedGraph, text: &str) -> Result<Self> {
        let raw: CurveJson =
            serde_json::from_str(text).map_err(|e| Error::Curve(e.to_string()))?;
        Self::from_raw(g, &raw)
    }

    /// Builds a multicurve from parsed raw Dehn data (validated).
    pub fn from_raw(g: &DecoratedGraph, raw: &CurveJson) -> Result<Self> {
        let mut s = Self::empty(g);
        for (vid, arcs) in &raw.pants {
            let v = g
                .vertices
                .iter()
                .position(|x| &x.id == vid)
                .ok_or_else(|| Error::Curve(format!("unknown pants {vid:?}")))?;
            s.pants.insert(v, *arcs);
        }
        for (eid, ann) in &raw.annuli {
            let e = g.edge_index(eid).map_err(|x| Error::Curve(x.to_string()))?;
            if !(1..=3).contains(&ann.pattern) {
                return Err(Error::Curve(format!("annulus pattern {} unknown", ann.pattern)));
            }
            s.annuli.insert(e, *ann);
            if ann.pattern != 3 {
                s.intersections[e] = ann.count;
            }
        }
        for (eid, c) in &raw.crossings {
            let e = g.edge_index(eid).map_err(|x| Error::Curve(x.to_string()))?;
            s.crossings[e] = *c;
        }
        s.validate(g)?;
        if let Some(c) = recognize(g, &s) {
            s.n_components = c.len();
            s.components = c;
        }
        Ok(s)
    }

    /// Checks that arc endpoints match annulus crossing counts on both sides
    /// of every decomposition curve.
    pub fn validate(&self, g: &DecoratedGraph) -> Result<()> {
        for v in g.internal_vertices() {
            let arcs = self.pants.get(&v).copied().unwrap_or_default();
            for (slot, &end) in g.vertices[v].cyclic.iter().enumerate() {
                let e = g.ends[end].edge;
                let have = arcs.endpoints(slot);
                let want = self.intersections[e];
                if have != want {
                    return Err(Error::Curve(format!(
                        "gluing mismatch at pants {} slot {slot}: {have} arc ends against I_{} = {want}",
                        g.vertices[v].id, g.edges[e].id
                    )));
                }
            }
        }
        for (&e, ann) in &self.annuli {
            if !g.is_internal(e) && ann.count > 0 {
                return Err(Error::Curve(format!(
                    "curve enters the annulus of leg {}",
                    g.edges[e].id
                )));
            }
        }
        Ok(())
    }

    /// Sum of intersection numbers.
    pub fn total_intersection(&self) -> u32 {
        self.intersections.iter().sum()
    }

    /// Disjoint union with another multicurve (the caller asserts
    /// disjointness; library components are checked).
    pub fn union(&self, other: &MulticurveSpec, g: &DecoratedGraph) -> Result<MulticurveSpec> {
        for a in &self.components {
            for b in &other.components {
                if components_intersect(a, b) {
                    return Err(Error::Curve(format!("{a} and {b} intersect")));
                }
            }
        }
        let mut s = self.clone();
        for (v, arcs) in &other.pants {
            s.pants.entry(*v).or_default().add(arcs);
        }
        for (e, ann) in &other.annuli {
            let entry = s.annuli.entry(*e).or_insert(AnnulusData {
                pattern: ann.pattern,
                count: 0,
                twist: ann.twist,
            });
            if entry.count > 0 && (entry.pattern == 3) != (ann.pattern == 3) {
                return Err(Error::Curve("cores and crossing arcs in one annulus".into()));
            }
            if entry.count > 0 && entry.twist != ann.twist {
                return Err(Error::Capability(
                    "parallel arcs with different twists in one annulus".into(),
                ));
            }
            entry.count += ann.count;
        }
        for e in 0..g.num_edges() {
            s.intersections[e] += other.intersections[e];
            s.crossings[e][0] += other.crossings[e][0];
            s.crossings[e][1] += other.crossings[e][1];
        }
        s.components.extend(other.components.iter().copied());
        s.n_components += other.n_components;
        s.validate(g)?;
        Ok(s)
    }

    /// `p` parallel copies.
    pub fn power(&self, p: usize, g: &DecoratedGraph) -> Result<MulticurveSpec> {
        if p == 0 {
            return Err(Error::Curve("power must be positive".into()));
        }
        let mut s = self.clone();
        for _ in 1..p {
            let mut next = s.clone();
            for (v, arcs) in &self.pants {
                next.pants.entry(*v).or_default().add(arcs);
            }
            for (e, ann) in &self.annuli {
                next.annuli.get_mut(e).unwrap().count += ann.count;
            }
            for e in 0..g.num_edges() {
                next.intersections[e] += self.intersections[e];
                next.crossings[e][0] += self.crossings[e][0];
                next.crossings[e][1] += self.crossings[e][1];
            }
            next.components.extend(self.components.iter().copied());
            next.n_components += self.n_components;
            s = next;
        }
        s.validate(g)?;
        Ok(s)
    }

    /// A short identifier such as `D[e]+C[f]`.
    pub fn label(&self, g: &DecoratedGraph) -> String {
        if self.components.is_empty() {
            return "raw".into();
        }
        self.components
            .iter()
            .map(|c| match *c {
                ComponentKind::Decomposition(e) => format!("C_{}", g.edges[e].id),
                ComponentKind::Dual { edge, twist: 0 } => format!("D_{}", g.edges[edge].id),
                ComponentKind::Dual { edge, twist } => {
                    format!("tw{}(D_{})", twist, g.edges[edge].id)
                }
            })
            .collect::<Vec<_>>()
            .join("+")
    }
}

fn components_intersect(a: &ComponentKind, b: &ComponentKind) -> bool {
    match (a, b) {
        (ComponentKind::Decomposition(_), ComponentKind::Decomposition(_)) => false,
        (ComponentKind::Decomposition(e), ComponentKind::Dual { edge, .. })
        | (ComponentKind::Dual { edge, .. }, ComponentKind::Decomposition(e)) => e == edge,
        (ComponentKind::Dual { edge: e, twist: s }, ComponentKind::Dual { edge: f, twist: t }) => {
            // Parallel copies of the same curve are disjoint; dual curves of
            // different edges sharing a vertex cross.
            !(e == f && s == t)
        }
    }
}

/// The library curves `C_e`, `D_e`, `τ^m_{C_e}(D_e)`.
pub fn standard_curve(g: &DecoratedGraph, kind: StandardKind, e: usize) -> Result<MulticurveSpec> {
    if e >= g.num_edges() {
        return Err(Error::Curve(format!("edge index {e} out of range")));
    }
    if !g.is_internal(e) {
        return Err(Error::Curve(format!(
            "edge {} is a boundary leg",
            g.edges[e].id
        )));
    }
    let mut s = MulticurveSpec::empty(g);
    s.n_components = 1;
    match kind {
        StandardKind::Decomposition => {
            s.components.push(ComponentKind::Decomposition(e));
            s.annuli.insert(
                e,
                AnnulusData {
                    pattern: 3,
                    count: 1,
                    twist: 0,
                },
            );
            s.crossings[e] = [1, 1];
        }
        StandardKind::Dual | StandardKind::TwistedDual(_) => {
            let twist = match kind {
                StandardKind::TwistedDual(m) => m,
                _ => 0,
            };
            s.components.push(ComponentKind::Dual { edge: e, twist });
            match g.edges[e].kind {
                EdgeKind::Loop { vertex } => {
                    let cyc = &g.vertices[vertex].cyclic;
                    let slots: Vec<usize> =
                        (0..3).filter(|&i| g.ends[cyc[i]].edge == e).collect();
                    let mut arcs = PantsArcs::default();
                    match (slots[0], slots[1]) {
                        (0, 1) => arcs.gamma = 1,
                        (0, 2) => arcs.beta = 1,
                        _ => arcs.alpha = 1,
                    }
                    s.pants.insert(vertex, arcs);
                    s.intersections[e] = 1;
                    let f = g.loop_partner(e)?;
                    s.crossings[f] = [1, 1];
                }
                EdgeKind::Joining { v1, v2 } => {
                    for v in [v1, v2] {
                        let cyc = &g.vertices[v].cyclic;
                        let slot = (0..3).find(|&i| g.ends[cyc[i]].edge == e).unwrap();
                        let mut arcs = PantsArcs::default();
                        arcs.self_arcs[slot] = 1;
                        s.pants.insert(v, arcs);
                    }
                    s.intersections[e] = 2;
                    let [_, _, c, d] = g.joining_neighbours(e)?;
                    s.crossings[c][0] += 1;
                    s.crossings[c][1] += 1;
                    s.crossings[d][0] += 1;
                    s.crossings[d][1] += 1;
                }
                EdgeKind::Leg { .. } => unreachable!(),
            }
            s.annuli.insert(
                e,
                AnnulusData {
                    pattern: if twist == 0 { 1 } else { 2 },
                    count: s.intersections[e],
                    twist,
                },
            );
        }
    }
    s.validate(g)?;
    Ok(s)
}

/// Dehn-twists a multicurve `m` times along `C_e`.
pub fn apply_dehn_twist(gamma: &MulticurveSpec, e: usize, m: i64) -> MulticurveSpec {
    if m == 0 {
        return gamma.clone();
    }
    let mut s = gamma.clone();
    for c in s.components.iter_mut() {
        if let ComponentKind::Dual { edge, twist } = c {
            if *edge == e {
                *twist += m;
            }
        }
    }
    if let Some(ann) = s.annuli.get_mut(&e) {
        if ann.pattern != 3 && ann.count > 0 {
            ann.twist += m;
            ann.pattern = if ann.twist == 0 { 1 } else { 2 };
        }
    }
    s
}

/// Recognizes raw Dehn data as a single library component, if possible.
pub fn recognize(g: &DecoratedGraph, s: &MulticurveSpec) -> Option<Vec<ComponentKind>> {
    if !s.components.is_empty() {
        return Some(s.components.clone());
    }
    for &e in &g.internal_edges {
        let twist = s.annuli.get(&e).map(|a| a.twist).unwrap_or(0);
        for kind in [StandardKind::Decomposition, StandardKind::TwistedDual(twist)] {
            if let Ok(mut c) = standard_curve(g, kind, e) {
                c.crossings = s.crossings.clone();
                let same_pants = c
                    .pants
                    .iter()
                    .filter(|(_, a)| !a.is_empty())
                    .eq(s.pants.iter().filter(|(_, a)| !a.is_empty()));
                let same_annuli = c
                    .annuli
                    .iter()
                    .filter(|(_, a)| a.count > 0)
                    .eq(s.annuli.iter().filter(|(_, a)| a.count > 0));
                if same_pants && same_annuli {
                    return Some(c.components);
                }
            }
        }
    }
    None
}

/// A word in the fixed generators of a test surface, one per component.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CurveWord {
    /// Letters `(generator, exponent)` per component.
    pub components: Vec<Vec<(String, i64)>>,
}

impl CurveWord {
    /// A single-component word.
    pub fn single(letters: Vec<(&str, i64)>) -> Self {
        CurveWord {
            components: vec![letters.into_iter().map(|(s, k)| (s.to_string(), k)).collect()],
        }
    }

    /// Parses `"a b^-1 a^3"`-style text into a single component.
    pub fn parse(text: &str) -> Result<Self> {
        let mut letters = Vec::new();
        for tok in text.split_whitespace() {
            let (name, exp) = match tok.split_once('^') {
                Some((n, k)) => (
                    n,
                    k.parse::<i64>()
                        .map_err(|_| Error::Usage(format!("bad exponent in {tok:?}")))?,
                ),
                None => (tok, 1),
            };
            if name.is_empty() {
                return Err(Error::Usage(format!("empty generator in {tok:?}")));
            }
            letters.push((name.to_string(), exp));
        }
        Ok(CurveWord {
            components: vec![letters],
        })
    }
}

impl fmt::Display for CurveWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .components
            .iter()
            .map(|w| {
                w.iter()
                    .map(|(g, k)| if *k == 1 { g.clone() } else { format!("{g}^{k}") })
                    .collect::<Vec<_>>()
                    .join(" ")
            })
            .collect();
        write!(f, "{}", parts.join(" | "))
    }
}

fn letters(spec: &[(&str, i64)]) -> Vec<(String, i64)> {
    spec.iter()
        .filter(|(_, k)| *k != 0)
        .map(|(s, k)| (s.to_string(), *k))
        .collect()
}

/// Word of one library component on a test surface.
fn component_word(surface: TestSurface, g: &DecoratedGraph, comp: &ComponentKind) -> Result<Vec<(String, i64)>> {
    let id = |e: usize| g.edges[e].id.as_str();
    let missing = || {
        Error::NotInWordTable(format!(
            "component {comp} on {}",
            surface.name()
        ))
    };
    Ok(match (surface, *comp) {
        (TestSurface::Torus, ComponentKind::Decomposition(e)) if id(e) == "e" => letters(&[("a", 1)]),
        (TestSurface::Torus, ComponentKind::Dual { edge, twist }) if id(edge) == "e" => {
            letters(&[("b", 1), ("a", twist)])
        }
        (TestSurface::Sphere4, ComponentKind::Decomposition(e)) if id(e) == "e" => {
            letters(&[("x1", 1), ("x2", 1)])
        }
        (TestSurface::Sphere4, ComponentKind::Dual { edge, twist }) if id(edge) == "e" => {
            // x2 · (x1x2)^{−m} · x3 · (x1x2)^{m}
            let mut w = vec![("x2".to_string(), 1)];
            let pair = |m: i64| -> Vec<(String, i64)> {
                let one: Vec<(String, i64)> = if m > 0 {
                    letters(&[("x1", 1), ("x2", 1)])
                } else {
                    letters(&[("x2", -1), ("x1", -1)])
                };
                (0..m.unsigned_abs()).flat_map(|_| one.clone()).collect()
            };
            w.extend(pair(-twist));
            w.push(("x3".to_string(), 1));
            w.extend(pair(twist));
            w
        }
        (TestSurface::Genus2, ComponentKind::Decomposition(e)) => match id(e) {
            "e1" => letters(&[("A1", 1)]),
            "e2" => letters(&[("A2", 1)]),
            "e3" => letters(&[("A3", 1)]),
            _ => return Err(missing()),
        },
        (TestSurface::Genus2, ComponentKind::Dual { edge, twist: m }) => match id(edge) {
            "e1" => letters(&[("A3", 1), ("B1", m), ("B2", 1), ("B1", -m)]),
            "e2" => letters(&[("A1", 1), ("t2", 1), ("B2", m), ("B3", 1), ("B2", -m), ("t2", -1)]),
            "e3" => letters(&[("A2", 1), ("t3", 1), ("B3", m), ("B1", 1), ("B3", -m), ("t3", -1)]),
            _ => return Err(missing()),
        },
        _ => return Err(missing()),
    })
}

/// Words of a library multicurve in the fixed generators of a test surface,
/// one word per component.
///
/// Generators:
///
/// * punctured torus: `a` (holonomy of `C_e`) and `b` (of `D_e`);
/// * four-holed sphere: peripheral `x1..x4` with `x1 x2 x3 x4 = 1`;
/// * genus two: `A1, A2, A3` and `B1, B2, B3` (the boundary holonomies of the
///   two pairs of pants, with `A1A2A3 = B1B2B3 = 1` and `B1 = A1⁻¹`) and the
///   stable letters `t2`, `t3` of the gluings along `C_2`, `C_3`.
///
/// A Dehn twist `τ^m_{C_e}` conjugates the part of the word beyond `C_e` by
/// the `m`-th power of the holonomy of `C_e`.
pub fn curve_word(surface: TestSurface, g: &DecoratedGraph, gamma: &MulticurveSpec) -> Result<CurveWord> {
    if gamma.components.is_empty() {
        return Err(Error::NotInWordTable(
            "raw Dehn data has no word; only library curves are tabulated".into(),
        ));
    }
    let components = gamma
        .components
        .iter()
        .map(|c| component_word(surface, g, c))
        .collect::<Result<Vec<_>>>()?;
    Ok(CurveWord { components })
}

/// Parses a library curve identifier, the inverse of
/// [`MulticurveSpec::label`]: terms `C_<edge>`, `D_<edge>` and
/// `tw<m>(D_<edge>)`, each optionally prefixed by a multiplicity `n*`
/// (parallel copies), joined by `+` into a disjoint union.
///
/// ```
/// use curveops::curves::parse_curve;
/// use curveops::surface::TestSurface;
/// let g = TestSurface::Genus2.graph();
/// let gamma = parse_curve(&g, "C_e1+tw-1(D_e2)").unwrap();
/// assert_eq!(gamma.n_components, 2);
/// assert_eq!(gamma.label(&g), "C_e1+tw-1(D_e2)");
/// ```
pub fn parse_curve(g: &DecoratedGraph, text: &str) -> Result<MulticurveSpec> {
    let mut out: Option<MulticurveSpec> = None;
    for term in text.split('+') {
        let term = term.trim();
        let (mult, atom) = match term.split_once('*') {
            Some((n, a)) => (
                n.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::Usage(format!("bad multiplicity in {term:?}")))?,
                a.trim(),
            ),
            None => (1, term),
        };
        let edge = |name: &str| -> Result<usize> {
            g.edge_index(name)
                .map_err(|_| Error::Usage(format!("unknown edge {name:?} in {term:?}")))
        };
        let spec = if let Some(e) = atom.strip_prefix("C_") {
            standard_curve(g, StandardKind::Decomposition, edge(e)?)?
        } else if let Some(e) = atom.strip_prefix("D_") {
            standard_curve(g, StandardKind::Dual, edge(e)?)?
        } else if let Some(rest) = atom.strip_prefix("tw") {
            let (m, inner) = rest
                .split_once('(')
                .and_then(|(m, tail)| Some((m, tail.strip_suffix(')')?)))
                .ok_or_else(|| Error::Usage(format!("expected tw<m>(D_<edge>), got {atom:?}")))?;
            let m: i64 = m
                .parse()
                .map_err(|_| Error::Usage(format!("bad twist count in {atom:?}")))?;
            let e = inner
                .strip_prefix("D_")
                .ok_or_else(|| Error::Usage(format!("only dual curves are twisted: {atom:?}")))?;
            standard_curve(g, StandardKind::TwistedDual(m), edge(e)?)?
        } else {
            return Err(Error::Usage(format!(
                "unknown curve term {atom:?} (expected C_<edge>, D_<edge> or tw<m>(D_<edge>))"
            )));
        };
        let spec = spec.power(mult, g)?;
        out = Some(match out {
            None => spec,
            Some(prev) => prev.union(&spec, g)?,
        });
    }
    out.ok_or_else(|| Error::Usage("empty curve identifier".into()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn labels_round_trip() {
        for s in TestSurface::ALL {
            let g = s.graph();
            for &e in &g.internal_edges {
                for kind in [
                    StandardKind::Decomposition,
                    StandardKind::Dual,
                    StandardKind::TwistedDual(2),
                    StandardKind::TwistedDual(-1),
                ] {
                    let c = standard_curve(&g, kind, e).unwrap();
                    let back = parse_curve(&g, &c.label(&g)).unwrap();
                    assert_eq!(back, c);
                }
            }
        }
    }

    #[test]
    fn powers_and_unions() {
        let g = TestSurface::Genus2.graph();
        let c = parse_curve(&g, "2*C_e1+C_e2").unwrap();
        assert_eq!(c.n_components, 3);
        assert!(parse_curve(&g, "D_e1+D_e2").is_err());
        assert!(matches!(parse_curve(&g, "Q_e1"), Err(Error::Usage(_))));
        assert!(matches!(parse_curve(&g, "C_zz"), Err(Error::Usage(_))));
    }
}
