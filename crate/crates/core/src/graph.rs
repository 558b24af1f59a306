//! Reeb graphs as level-labelled multigraphs.
//!
//! A [`ReebGraph`] stores vertices carrying exact function values and a
//! multiset of edges. Each edge is a monotone arc: its endpoints must carry
//! different values, and the induced map is extended linearly along it.
//! Edges are normalized on construction so that the first endpoint is the
//! lower one.

use std::collections::{BTreeMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::value::Value;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Vertex {
    pub id: u64,
    pub value: Value,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReebGraph {
    name: Option<String>,
    vertices: Vec<Vertex>,
    edges: Vec<(usize, usize)>,
    adjacency: Vec<Vec<usize>>,
}

/// A point of the graph: a vertex, or an interior point of an edge.
///
/// `t` runs from the lower endpoint (0) to the upper one (1); the value is
/// interpolated linearly.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GraphPoint {
    Vertex(usize),
    Edge { edge: usize, t: Value },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    Empty,
    DuplicateId(u64),
    LevelEdge { edge: usize, value: Value },
    Disconnected { components: usize },
    PassThrough { vertex: u64 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Empty => write!(f, "empty graph"),
            Violation::DuplicateId(id) => write!(f, "duplicate vertex id {id}"),
            Violation::LevelEdge { edge, value } => {
                write!(f, "level edge #{edge} at value {value}")
            }
            Violation::Disconnected { components } => {
                write!(f, "disconnected ({components} components)")
            }
            Violation::PassThrough { vertex } => {
                write!(f, "pass-through vertex {vertex}")
            }
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_empty(&self) -> bool {
        self.violations.is_empty()
    }

    /// Violations other than removable pass-through vertices.
    pub fn structural(&self) -> impl Iterator<Item = &Violation> {
        self.violations
            .iter()
            .filter(|v| !matches!(v, Violation::PassThrough { .. }))
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.violations.iter().map(|v| v.to_string()).collect();
        write!(f, "{}", parts.join("; "))
    }
}

/// Sorted, distinct critical values.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CriticalValues(pub Vec<Value>);

impl CriticalValues {
    pub fn new(mut values: Vec<Value>) -> CriticalValues {
        values.sort();
        values.dedup();
        CriticalValues(values)
    }

    pub fn values(&self) -> &[Value] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn min_gap(&self) -> Result<Value> {
        self.0
            .windows(2)
            .map(|w| w[1] - w[0])
            .min()
            .ok_or(Error::TooFewCriticalValues)
    }
}

/// A connected component of the preimage of an open interval free of
/// critical values; `edges` are the graph edges it runs along.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arc {
    pub edges: Vec<usize>,
}

impl ReebGraph {
    /// Build from `(id, value)` pairs and edges given by vertex ids.
    pub fn new(vertices: Vec<(u64, Value)>, edges: Vec<(u64, u64)>) -> Result<ReebGraph> {
        let mut index = BTreeMap::new();
        for (i, (id, _)) in vertices.iter().enumerate() {
            if index.insert(*id, i).is_some() {
                return Err(Error::InvalidGraph(format!("duplicate vertex id {id}")));
            }
        }
        let mut idx_edges = Vec::with_capacity(edges.len());
        for (a, b) in edges {
            let ia = *index
                .get(&a)
                .ok_or_else(|| Error::InvalidGraph(format!("edge refers to unknown vertex {a}")))?;
            let ib = *index
                .get(&b)
                .ok_or_else(|| Error::InvalidGraph(format!("edge refers to unknown vertex {b}")))?;
            idx_edges.push((ia, ib));
        }
        let vertices = vertices
            .into_iter()
            .map(|(id, value)| Vertex { id, value })
            .collect();
        Ok(ReebGraph::from_parts(vertices, idx_edges))
    }

    /// Build from vertices and index-based edges. Edges are normalized so the
    /// lower endpoint comes first.
    pub fn from_parts(vertices: Vec<Vertex>, edges: Vec<(usize, usize)>) -> ReebGraph {
        let edges: Vec<(usize, usize)> = edges
            .into_iter()
            .map(|(a, b)| {
                if vertices[b].value < vertices[a].value {
                    (b, a)
                } else {
                    (a, b)
                }
            })
            .collect();
        let mut adjacency = vec![Vec::new(); vertices.len()];
        for (e, &(a, b)) in edges.iter().enumerate() {
            adjacency[a].push(e);
            if b != a {
                adjacency[b].push(e);
            }
        }
        ReebGraph {
            name: None,
            vertices,
            edges,
            adjacency,
        }
    }

    /// Convenience: vertex ids are `0..values.len()`.
    pub fn from_values(values: &[Value], edges: &[(usize, usize)]) -> ReebGraph {
        let vertices = values
            .iter()
            .enumerate()
            .map(|(i, &value)| Vertex { id: i as u64, value })
            .collect();
        ReebGraph::from_parts(vertices, edges.to_vec())
    }

    pub fn with_name(mut self, name: impl Into<String>) -> ReebGraph {
        self.name = Some(name.into());
        self
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn value(&self, v: usize) -> Value {
        self.vertices[v].value
    }

    pub fn values(&self) -> Vec<Value> {
        self.vertices.iter().map(|v| v.value).collect()
    }

    pub fn index_of(&self, id: u64) -> Option<usize> {
        self.vertices.iter().position(|v| v.id == id)
    }

    /// Edge indices incident to `v`.
    pub fn incident(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn other_end(&self, e: usize, v: usize) -> usize {
        let (a, b) = self.edges[e];
        if a == v {
            b
        } else {
            a
        }
    }

    /// Number of incident edges going down and going up.
    pub fn down_up_degree(&self, v: usize) -> (usize, usize) {
        let mut down = 0;
        let mut up = 0;
        for &e in &self.adjacency[v] {
            let w = self.other_end(e, v);
            if self.value(w) < self.value(v) {
                down += 1;
            } else if self.value(w) > self.value(v) {
                up += 1;
            }
        }
        (down, up)
    }

    pub fn is_pass_through(&self, v: usize) -> bool {
        self.down_up_degree(v) == (1, 1) && self.adjacency[v].len() == 2
    }

    pub fn is_critical(&self, v: usize) -> bool {
        !self.is_pass_through(v)
    }

    pub fn min_value(&self) -> Value {
        self.vertices.iter().map(|v| v.value).min().unwrap_or_default()
    }

    pub fn max_value(&self) -> Value {
        self.vertices.iter().map(|v| v.value).max().unwrap_or_default()
    }

    /// First Betti number `E - V + C`.
    pub fn betti1(&self) -> usize {
        self.edges.len() + self.component_labels().1 - self.vertices.len()
    }

    /// Component label per vertex, and the number of components.
    pub fn component_labels(&self) -> (Vec<usize>, usize) {
        let n = self.vertices.len();
        let mut label = vec![usize::MAX; n];
        let mut count = 0;
        for s in 0..n {
            if label[s] != usize::MAX {
                continue;
            }
            let mut stack = vec![s];
            label[s] = count;
            while let Some(x) = stack.pop() {
                for &e in &self.adjacency[x] {
                    let y = self.other_end(e, x);
                    if label[y] == usize::MAX {
                        label[y] = count;
                        stack.push(y);
                    }
                }
            }
            count += 1;
        }
        (label, count)
    }

    pub fn is_connected(&self) -> bool {
        !self.vertices.is_empty() && self.component_labels().1 == 1
    }

    pub fn validate(&self) -> ValidationReport {
        let mut violations = Vec::new();
        if self.vertices.is_empty() {
            violations.push(Violation::Empty);
            return ValidationReport { violations };
        }
        let mut seen = HashSet::new();
        for v in &self.vertices {
            if !seen.insert(v.id) {
                violations.push(Violation::DuplicateId(v.id));
            }
        }
        for (e, &(a, b)) in self.edges.iter().enumerate() {
            if self.value(a) == self.value(b) {
                violations.push(Violation::LevelEdge {
                    edge: e,
                    value: self.value(a),
                });
            }
        }
        let components = self.component_labels().1;
        if components > 1 {
            violations.push(Violation::Disconnected { components });
        }
        for v in 0..self.vertices.len() {
            if self.is_pass_through(v) {
                violations.push(Violation::PassThrough {
                    vertex: self.vertices[v].id,
                });
            }
        }
        ValidationReport { violations }
    }

    /// Error unless the graph is valid and connected (pass-through vertices
    /// tolerated when `allow_pass_through`).
    pub fn check(&self, allow_pass_through: bool) -> Result<()> {
        let report = self.validate();
        let bad: Vec<String> = report
            .violations
            .iter()
            .filter(|v| !(allow_pass_through && matches!(v, Violation::PassThrough { .. })))
            .map(|v| v.to_string())
            .collect();
        if bad.is_empty() {
            Ok(())
        } else {
            Err(Error::InvalidGraph(bad.join("; ")))
        }
    }

    fn check_monotone(&self) -> Result<()> {
        if self.vertices.is_empty() {
            return Err(Error::InvalidGraph("empty graph".into()));
        }
        for (e, &(a, b)) in self.edges.iter().enumerate() {
            if self.value(a) == self.value(b) {
                return Err(Error::InvalidGraph(format!(
                    "level edge #{e} at value {}",
                    self.value(a)
                )));
            }
        }
        Ok(())
    }

    /// Remove every pass-through vertex, splicing its two edges into one.
    pub fn canonicalize(&self) -> Result<ReebGraph> {
        self.check_monotone()?;
        Ok(self.canonicalize_unchecked())
    }

    pub(crate) fn canonicalize_unchecked(&self) -> ReebGraph {
        let n = self.vertices.len();
        let mut edges: Vec<Option<(usize, usize)>> = self.edges.iter().copied().map(Some).collect();
        let mut adj: Vec<Vec<usize>> = self.adjacency.clone();
        let mut removed = vec![false; n];
        for v in 0..n {
            if !self.is_pass_through(v) {
                continue;
            }
            let (e1, e2) = (adj[v][0], adj[v][1]);
            let (a1, b1) = edges[e1].expect("live edge");
            let (a2, b2) = edges[e2].expect("live edge");
            let u = if a1 == v { b1 } else { a1 };
            let w = if a2 == v { b2 } else { a2 };
            edges[e1] = Some((u, w));
            edges[e2] = None;
            for x in adj[w].iter_mut() {
                if *x == e2 {
                    *x = e1;
                }
            }
            adj[v].clear();
            removed[v] = true;
        }
        let mut remap = vec![usize::MAX; n];
        let mut vertices = Vec::new();
        for v in 0..n {
            if !removed[v] {
                remap[v] = vertices.len();
                vertices.push(self.vertices[v].clone());
            }
        }
        let new_edges = edges
            .into_iter()
            .flatten()
            .map(|(a, b)| (remap[a], remap[b]))
            .collect();
        let mut g = ReebGraph::from_parts(vertices, new_edges);
        g.name = self.name.clone();
        g
    }

    pub fn critical_values(&self) -> CriticalValues {
        CriticalValues::new(
            (0..self.vertices.len())
                .filter(|&v| self.is_critical(v))
                .map(|v| self.value(v))
                .collect(),
        )
    }

    /// Smallest gap between consecutive critical values.
    pub fn min_critical_gap(&self) -> Result<Value> {
        self.critical_values().min_gap()
    }

    /// Components of the preimage of the open interval `(lo, hi)`.
    pub fn arcs_in_interval(&self, lo: Value, hi: Value) -> Result<Vec<Arc>> {
        if lo >= hi {
            return Err(Error::BadParams(format!("empty interval ({lo}, {hi})")));
        }
        if let Some(&c) = self
            .critical_values()
            .values()
            .iter()
            .find(|&&c| lo < c && c < hi)
        {
            return Err(Error::CriticalInInterval {
                lo: lo.to_string(),
                hi: hi.to_string(),
                crit: c.to_string(),
            });
        }
        // Edges meeting the band, glued through pass-through vertices inside it.
        let touching: Vec<usize> = (0..self.edges.len())
            .filter(|&e| {
                let (a, b) = self.edges[e];
                self.value(a) < hi && self.value(b) > lo
            })
            .collect();
        let mut parent: Vec<usize> = (0..touching.len()).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            let mut y = x;
            while p[y] != r {
                let next = p[y];
                p[y] = r;
                y = next;
            }
            r
        }
        for v in 0..self.vertices.len() {
            let val = self.value(v);
            if !(lo < val && val < hi) {
                continue;
            }
            let here: Vec<usize> = touching
                .iter()
                .enumerate()
                .filter(|(_, &e)| self.edges[e].0 == v || self.edges[e].1 == v)
                .map(|(i, _)| i)
                .collect();
            for w in here.windows(2) {
                let (ra, rb) = (find(&mut parent, w[0]), find(&mut parent, w[1]));
                parent[ra] = rb;
            }
        }
        let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for i in 0..touching.len() {
            let r = find(&mut parent, i);
            groups.entry(r).or_default().push(touching[i]);
        }
        let mut arcs: Vec<Arc> = groups.into_values().map(|edges| Arc { edges }).collect();
        arcs.sort_by(|a, b| a.edges.cmp(&b.edges));
        Ok(arcs)
    }

    /// Split into connected components, each a standalone graph.
    pub fn split_components(&self) -> Vec<ReebGraph> {
        let (label, count) = self.component_labels();
        (0..count)
            .map(|c| {
                let mut remap = vec![usize::MAX; self.vertices.len()];
                let mut vertices = Vec::new();
                for v in 0..self.vertices.len() {
                    if label[v] == c {
                        remap[v] = vertices.len();
                        vertices.push(self.vertices[v].clone());
                    }
                }
                let edges = self
                    .edges
                    .iter()
                    .filter(|(a, _)| label[*a] == c)
                    .map(|&(a, b)| (remap[a], remap[b]))
                    .collect();
                ReebGraph::from_parts(vertices, edges)
            })
            .collect()
    }

    /// Same combinatorial graph with vertex values replaced.
    pub fn with_values(&self, values: &[Value]) -> ReebGraph {
        assert_eq!(values.len(), self.vertices.len());
        let vertices = self
            .vertices
            .iter()
            .zip(values)
            .map(|(v, &value)| Vertex { id: v.id, value })
            .collect();
        let mut g = ReebGraph::from_parts(vertices, self.edges.clone());
        g.name = self.name.clone();
        g
    }

    /// Vertex ids renumbered `0..n` in storage order.
    pub fn renumbered(&self) -> ReebGraph {
        let vertices = self
            .vertices
            .iter()
            .enumerate()
            .map(|(i, v)| Vertex {
                id: i as u64,
                value: v.value,
            })
            .collect();
        let mut g = ReebGraph::from_parts(vertices, self.edges.clone());
        g.name = self.name.clone();
        g
    }

    pub fn point_value(&self, p: &GraphPoint) -> Value {
        match *p {
            GraphPoint::Vertex(v) => self.value(v),
            GraphPoint::Edge { edge, t } => {
                let (a, b) = self.edges[edge];
                self.value(a) + t * (self.value(b) - self.value(a))
            }
        }
    }

    pub fn check_point(&self, p: &GraphPoint) -> Result<()> {
        match *p {
            GraphPoint::Vertex(v) if v < self.vertices.len() => Ok(()),
            GraphPoint::Edge { edge, t }
                if edge < self.edges.len() && t >= Value::ZERO && t <= Value::ONE =>
            {
                Ok(())
            }
            _ => Err(Error::BadPoint(format!("{p:?}"))),
        }
    }

    /// The point on edge `e` carrying value `value` (clamped into the edge).
    pub fn point_at_value(&self, e: usize, value: Value) -> GraphPoint {
        let (a, b) = self.edges[e];
        let (lo, hi) = (self.value(a), self.value(b));
        if value <= lo {
            GraphPoint::Vertex(a)
        } else if value >= hi {
            GraphPoint::Vertex(b)
        } else {
            GraphPoint::Edge {
                edge: e,
                t: (value - lo) / (hi - lo),
            }
        }
    }

    /// Normalize `t == 0` / `t == 1` edge points to vertices.
    pub fn normalize_point(&self, p: GraphPoint) -> GraphPoint {
        match p {
            GraphPoint::Edge { edge, t } if t == Value::ZERO => GraphPoint::Vertex(self.edges[edge].0),
            GraphPoint::Edge { edge, t } if t == Value::ONE => GraphPoint::Vertex(self.edges[edge].1),
            other => other,
        }
    }
}
