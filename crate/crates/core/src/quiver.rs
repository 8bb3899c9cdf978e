//! The bound quiver of a defining system.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde_json::json;

use crate::error::{Error, Result};
use crate::system::DefiningSystem;

/// A vertex `x_{i,j}`, `y_{i,j}` or `z_{i,j}` (`i` is 1-based).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Vertex {
    X(usize, u32),
    Y(usize, u32),
    Z(usize, u32),
}

impl Vertex {
    pub fn branch(&self) -> usize {
        match *self {
            Vertex::X(i, _) | Vertex::Y(i, _) | Vertex::Z(i, _) => i,
        }
    }

    pub fn level(&self) -> u32 {
        match *self {
            Vertex::X(_, j) | Vertex::Y(_, j) | Vertex::Z(_, j) => j,
        }
    }

    pub fn is_x(&self) -> bool {
        matches!(self, Vertex::X(..))
    }

    pub fn is_z(&self) -> bool {
        matches!(self, Vertex::Z(..))
    }

    /// Command-line syntax `x:i:j`.
    pub fn cli_name(&self) -> String {
        let (c, i, j) = self.parts();
        format!("{c}:{i}:{j}")
    }

    /// Subscripted name, e.g. `x_{1,6}`.
    pub fn math_name(&self) -> String {
        let (c, i, j) = self.parts();
        format!("{c}_{{{i},{j}}}")
    }

    fn parts(&self) -> (char, usize, u32) {
        match *self {
            Vertex::X(i, j) => ('x', i, j),
            Vertex::Y(i, j) => ('y', i, j),
            Vertex::Z(i, j) => ('z', i, j),
        }
    }
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (c, i, j) = self.parts();
        write!(f, "{c}_{i}_{j}")
    }
}

impl FromStr for Vertex {
    type Err = Error;

    /// Accepts `x:i:j`, `z:i:j`, `y:i:j` and the `x_i_j` display form.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::IndexSyntax(s.to_string());
        let parts: Vec<&str> = s.split([':', '_']).collect();
        if parts.len() != 3 {
            return Err(bad());
        }
        let i: usize = parts[1].parse().map_err(|_| bad())?;
        let j: u32 = parts[2].parse().map_err(|_| bad())?;
        if i == 0 {
            return Err(bad());
        }
        match parts[0] {
            "x" => Ok(Vertex::X(i, j)),
            "y" => Ok(Vertex::Y(i, j)),
            "z" => Ok(Vertex::Z(i, j)),
            _ => Err(bad()),
        }
    }
}

impl serde::Serialize for Vertex {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        ser.serialize_str(&self.cli_name())
    }
}

/// An arrow; `Alpha` arrows form the first group, the rest the second.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Arrow {
    Alpha(usize, u32),
    Beta(usize, u32),
    Gamma(usize, u32),
    Xi(usize, u32),
}

impl Arrow {
    pub fn is_first_kind(&self) -> bool {
        matches!(self, Arrow::Alpha(..))
    }

    fn parts(&self) -> (&'static str, &'static str, usize, u32) {
        match *self {
            Arrow::Alpha(i, j) => ("alpha", "α", i, j),
            Arrow::Beta(i, j) => ("beta", "β", i, j),
            Arrow::Gamma(i, j) => ("gamma", "γ", i, j),
            Arrow::Xi(i, j) => ("xi", "ξ", i, j),
        }
    }

    pub fn math_name(&self) -> String {
        let (_, g, i, j) = self.parts();
        format!("{g}_{{{i},{j}}}")
    }
}

impl fmt::Display for Arrow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (name, _, i, j) = self.parts();
        write!(f, "{name}_{i}_{j}")
    }
}

/// A path, stored in traversal order (source first).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Path {
    pub source: Vertex,
    pub target: Vertex,
    pub arrows: Vec<Arrow>,
}

impl Path {
    pub fn trivial(v: Vertex) -> Path {
        Path { source: v, target: v, arrows: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.arrows.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.arrows.is_empty()
    }

    /// Right-to-left composition (last arrow leftmost), as in relation lists.
    pub fn render(&self) -> String {
        if self.arrows.is_empty() {
            return self.source.math_name();
        }
        self.arrows.iter().rev().map(Arrow::math_name).collect::<Vec<_>>().join(" ")
    }

    pub fn arrow_names(&self) -> Vec<String> {
        self.arrows.iter().map(ToString::to_string).collect()
    }
}

impl fmt::Display for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RelationKind {
    /// `α_{i,j-1} α_{i,j} γ_{i,j}`
    R1,
    /// `β_{i,q_i} α_{i,p_i+1}`
    R2,
    /// `ξ_{i,j-1} α_{i,p_i+j}`
    R3,
    /// `α γ ξ = α ⋯ α`
    R4,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Relation {
    ZeroPath(RelationKind, Path),
    /// Two parallel paths declared equal; the first is `α γ ξ`, the second the `α` chain.
    Commutativity(Path, Path),
}

impl Relation {
    pub fn kind(&self) -> RelationKind {
        match self {
            Relation::ZeroPath(k, _) => *k,
            Relation::Commutativity(..) => RelationKind::R4,
        }
    }

    pub fn paths(&self) -> Vec<&Path> {
        match self {
            Relation::ZeroPath(_, p) => vec![p],
            Relation::Commutativity(a, b) => vec![a, b],
        }
    }

    pub fn source(&self) -> Vertex {
        self.paths()[0].source
    }

    pub fn target(&self) -> Vertex {
        self.paths()[0].target
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Relation::ZeroPath(_, p) => write!(f, "{p}"),
            Relation::Commutativity(a, b) => write!(f, "{a} - {b}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArrowData {
    pub arrow: Arrow,
    pub source: Vertex,
    pub target: Vertex,
}

/// Vertices, arrows and relations of the quiver of a defining system.
#[derive(Clone, Debug)]
pub struct BoundQuiver {
    ds: DefiningSystem,
    vertices: Vec<Vertex>,
    vertex_ids: BTreeMap<Vertex, usize>,
    arrows: Vec<ArrowData>,
    arrow_ids: BTreeMap<Arrow, usize>,
    relations: Vec<Relation>,
}

impl BoundQuiver {
    /// Builds `Q` and its relation list. `ds` must be valid.
    pub fn build(ds: &DefiningSystem) -> BoundQuiver {
        let n = ds.n();
        let mut vertices = Vec::new();
        for i in 1..=n {
            for j in 0..=ds.top(i) {
                vertices.push(Vertex::X(i, j));
            }
            for j in 1..ds.q_at(i) {
                vertices.push(Vertex::Y(i, j));
            }
            for &j in ds.s_of(i) {
                vertices.push(Vertex::Z(i, j));
            }
        }
        vertices.sort();
        let vertex_ids = vertices.iter().enumerate().map(|(k, v)| (*v, k)).collect();

        // y_{i,0} = x_{i+1,0} and y_{i,q_i} = x_{i,p_i}
        let y = |i: usize, j: u32| -> Vertex {
            if j == 0 {
                Vertex::X(ds.wrap(i as i64 + 1), 0)
            } else if j == ds.q_at(i) {
                Vertex::X(i, ds.p_at(i))
            } else {
                Vertex::Y(i, j)
            }
        };

        let mut arrows = Vec::new();
        for i in 1..=n {
            for j in 1..=ds.top(i) {
                arrows.push(ArrowData { arrow: Arrow::Alpha(i, j), source: Vertex::X(i, j), target: Vertex::X(i, j - 1) });
            }
            for j in 1..=ds.q_at(i) {
                arrows.push(ArrowData { arrow: Arrow::Beta(i, j), source: y(i, j), target: y(i, j - 1) });
            }
            for &j in ds.s_of(i) {
                arrows.push(ArrowData { arrow: Arrow::Gamma(i, j), source: Vertex::Z(i, j), target: Vertex::X(i, j) });
            }
            for (k, &tj) in ds.t_of(i).iter().enumerate() {
                let j = k as u32 + 1;
                arrows.push(ArrowData {
                    arrow: Arrow::Xi(i, j),
                    source: Vertex::X(i, ds.p_at(i) + j),
                    target: Vertex::Z(i, tj),
                });
            }
        }
        arrows.sort_by_key(|a| a.arrow);
        let arrow_ids = arrows.iter().enumerate().map(|(k, a)| (a.arrow, k)).collect();

        let mut bq = BoundQuiver { ds: ds.clone(), vertices, vertex_ids, arrows, arrow_ids, relations: Vec::new() };
        bq.relations = bq.relation_list();
        bq
    }

    fn relation_list(&self) -> Vec<Relation> {
        let ds = &self.ds;
        let n = ds.n();
        let path = |start: Vertex, arrows: Vec<Arrow>| self.path(start, &arrows).expect("relation path composes");
        let mut out = Vec::new();
        for i in 1..=n {
            for &j in ds.s_of(i) {
                out.push(Relation::ZeroPath(
                    RelationKind::R1,
                    path(Vertex::Z(i, j), vec![Arrow::Gamma(i, j), Arrow::Alpha(i, j), Arrow::Alpha(i, j - 1)]),
                ));
            }
        }
        for i in 1..=n {
            if !ds.t_of(i).is_empty() {
                let p = ds.p_at(i);
                out.push(Relation::ZeroPath(
                    RelationKind::R2,
                    path(Vertex::X(i, p + 1), vec![Arrow::Alpha(i, p + 1), Arrow::Beta(i, ds.q_at(i))]),
                ));
            }
        }
        for i in 1..=n {
            let p = ds.p_at(i);
            for j in 2..=ds.t_of(i).len() as u32 {
                out.push(Relation::ZeroPath(
                    RelationKind::R3,
                    path(Vertex::X(i, p + j), vec![Arrow::Alpha(i, p + j), Arrow::Xi(i, j - 1)]),
                ));
            }
        }
        for i in 1..=n {
            let p = ds.p_at(i);
            for (k, &tj) in ds.t_of(i).iter().enumerate() {
                let j = k as u32 + 1;
                let start = Vertex::X(i, p + j);
                let short = path(start, vec![Arrow::Xi(i, j), Arrow::Gamma(i, tj), Arrow::Alpha(i, tj)]);
                let chain = path(start, (tj..=p + j).rev().map(|m| Arrow::Alpha(i, m)).collect());
                out.push(Relation::Commutativity(short, chain));
            }
        }
        out
    }

    pub fn system(&self) -> &DefiningSystem {
        &self.ds
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn arrows(&self) -> &[ArrowData] {
        &self.arrows
    }

    pub fn relations(&self) -> &[Relation] {
        &self.relations
    }

    pub fn vertex_id(&self, v: Vertex) -> Option<usize> {
        self.vertex_ids.get(&v).copied()
    }

    pub fn arrow_id(&self, a: Arrow) -> Option<usize> {
        self.arrow_ids.get(&a).copied()
    }

    pub fn has_vertex(&self, v: Vertex) -> bool {
        self.vertex_ids.contains_key(&v)
    }

    pub fn arrow_data(&self, a: Arrow) -> Option<&ArrowData> {
        self.arrow_id(a).map(|k| &self.arrows[k])
    }

    /// Builds a path from `start` following `arrows` in traversal order.
    pub fn path(&self, start: Vertex, arrows: &[Arrow]) -> Result<Path> {
        if !self.has_vertex(start) {
            return Err(Error::Domain(start.to_string(), "vertices of Q"));
        }
        let mut at = start;
        for a in arrows {
            let data = self.arrow_data(*a).ok_or_else(|| Error::Domain(a.to_string(), "arrows of Q"))?;
            if data.source != at {
                return Err(Error::Precondition(format!("arrow {a} does not start at {at}")));
            }
            at = data.target;
        }
        Ok(Path { source: start, target: at, arrows: arrows.to_vec() })
    }

    /// The path traversing `first` and then `second`.
    pub fn compose(&self, first: &Path, second: &Path) -> Option<Path> {
        if first.target != second.source {
            return None;
        }
        let mut arrows = first.arrows.clone();
        arrows.extend_from_slice(&second.arrows);
        Some(Path { source: first.source, target: second.target, arrows })
    }

    /// The single-arrow path.
    pub fn arrow_path(&self, a: Arrow) -> Option<Path> {
        self.arrow_data(a).map(|d| Path { source: d.source, target: d.target, arrows: vec![a] })
    }

    pub fn is_acyclic(&self) -> bool {
        let edges: Vec<(usize, usize)> = self
            .arrows
            .iter()
            .map(|a| (self.vertex_ids[&a.source], self.vertex_ids[&a.target]))
            .collect();
        is_acyclic(self.vertices.len(), &edges)
    }

    pub fn relation_counts(&self) -> [usize; 4] {
        let mut counts = [0; 4];
        for r in &self.relations {
            counts[r.kind() as usize] += 1;
        }
        counts
    }

    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph Q {\n");
        if !self.relations.is_empty() {
            out.push_str("  // relations\n");
            for r in &self.relations {
                out.push_str(&format!("  // {:?}: {}\n", r.kind(), r));
            }
        }
        for v in &self.vertices {
            out.push_str(&format!("  {v};\n"));
        }
        for a in &self.arrows {
            out.push_str(&format!("  {} -> {} [label=\"{}\"];\n", a.source, a.target, a.arrow));
        }
        out.push_str("}\n");
        out
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        let vertices: Vec<String> = self.vertices.iter().map(ToString::to_string).collect();
        let arrows: Vec<serde_json::Value> = self
            .arrows
            .iter()
            .map(|a| json!({"name": a.arrow.to_string(), "source": a.source.to_string(), "target": a.target.to_string()}))
            .collect();
        let relations: Vec<serde_json::Value> = self
            .relations
            .iter()
            .map(|r| {
                let kind = match r {
                    Relation::ZeroPath(..) => "zero",
                    Relation::Commutativity(..) => "comm",
                };
                let paths: Vec<Vec<String>> = r.paths().iter().map(|p| p.arrow_names()).collect();
                json!({"kind": kind, "paths": paths})
            })
            .collect();
        json!({"vertices": vertices, "arrows": arrows, "relations": relations})
    }
}

/// Kahn's algorithm on an edge list.
pub fn is_acyclic(vertex_count: usize, edges: &[(usize, usize)]) -> bool {
    let mut indegree = vec![0usize; vertex_count];
    let mut out: Vec<Vec<usize>> = vec![Vec::new(); vertex_count];
    for &(s, t) in edges {
        indegree[t] += 1;
        out[s].push(t);
    }
    let mut stack: Vec<usize> = (0..vertex_count).filter(|&v| indegree[v] == 0).collect();
    let mut seen = 0;
    while let Some(v) = stack.pop() {
        seen += 1;
        for &w in &out[v] {
            indegree[w] -= 1;
            if indegree[w] == 0 {
                stack.push(w);
            }
        }
    }
    seen == vertex_count
}
