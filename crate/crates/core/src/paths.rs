//! Discretized paths of Reeb graphs and their lengths.
//!
//! A path is a time-stamped sequence of graphs with, for every consecutive
//! pair, a certified upper bound on their functional distortion distance.
//! Summing either those certificates or the bottleneck distances of
//! consecutive graphs estimates the length of the path for that metric.

use serde::{Deserialize, Serialize};

use crate::bottleneck::graph_bottleneck;
use crate::distortion::{flatten, shared_structure, shared_structure_bound};
use crate::error::{Error, Result};
use crate::graph::ReebGraph;
use crate::iso::is_level_isomorphic;
use crate::operators::simplify;
use crate::persistence::{extended_diagram, Kind};
use crate::value::Value;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathStep {
    pub t: Value,
    pub graph: ReebGraph,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphPath {
    pub steps: Vec<PathStep>,
    /// `d_FD` upper bound between step `i` and step `i + 1`
    pub certificates: Vec<Value>,
}

impl GraphPath {
    /// Steps spread evenly over `[0, 1]`.
    pub fn from_graphs(graphs: Vec<ReebGraph>, certificates: Vec<Value>) -> Result<GraphPath> {
        if graphs.is_empty() {
            return Err(Error::EmptyPath);
        }
        let last = (graphs.len() - 1).max(1) as i128;
        let steps = graphs
            .into_iter()
            .enumerate()
            .map(|(i, graph)| PathStep { t: Value::new(i as i128, last), graph })
            .collect();
        let p = GraphPath { steps, certificates };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.steps.len();
        if n == 0 {
            return Err(Error::EmptyPath);
        }
        if self.certificates.len() + 1 != n {
            return Err(Error::BadParams(format!(
                "{} steps need {} certificates, got {}",
                n,
                n - 1,
                self.certificates.len()
            )));
        }
        if self.steps[0].t != Value::ZERO || (n > 1 && self.steps[n - 1].t != Value::ONE) {
            return Err(Error::BadParams("path times must run from 0 to 1".into()));
        }
        if self.steps.windows(2).any(|w| w[0].t >= w[1].t) {
            return Err(Error::BadParams("path times must increase strictly".into()));
        }
        if let Some(c) = self.certificates.iter().find(|c| **c < Value::ZERO) {
            return Err(Error::BadParams(format!("negative certificate {c}")));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn graphs(&self) -> impl Iterator<Item = &ReebGraph> {
        self.steps.iter().map(|s| &s.graph)
    }

    /// The path run backwards.
    pub fn reversed(&self) -> GraphPath {
        let steps = self
            .steps
            .iter()
            .rev()
            .map(|s| PathStep { t: Value::ONE - s.t, graph: s.graph.clone() })
            .collect();
        let mut certificates = self.certificates.clone();
        certificates.reverse();
        GraphPath { steps, certificates }
    }

    /// This path followed by `other`, which must start where this one ends.
    pub fn then(&self, other: &GraphPath) -> Result<GraphPath> {
        let mut graphs: Vec<ReebGraph> = self.graphs().cloned().collect();
        let mut certs = self.certificates.clone();
        graphs.extend(other.graphs().skip(1).cloned());
        certs.extend(other.certificates.iter().copied());
        GraphPath::from_graphs(graphs, certs)
    }
}

/// Which metric to sum along a path.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Metric {
    Bottleneck,
    FdUpper,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PathLength {
    pub total: Value,
    pub per_step: Vec<Value>,
}

pub fn path_length(p: &GraphPath, metric: Metric) -> Result<PathLength> {
    p.validate()?;
    let per_step = match metric {
        Metric::FdUpper => p.certificates.clone(),
        Metric::Bottleneck => p
            .steps
            .windows(2)
            .map(|w| graph_bottleneck(&w[0].graph, &w[1].graph))
            .collect::<Result<_>>()?,
    };
    Ok(PathLength { total: per_step.iter().copied().sum(), per_step })
}

/// First step `k` of `n` at which some edge stops going strictly up, if any.
fn first_bad_step(g: &ReebGraph, target: &[Value], n: usize) -> Option<usize> {
    let steps = Value::from_int(n as i128);
    let mut first: Option<usize> = None;
    for &(a, b) in g.edges() {
        let d0 = g.value(b) - g.value(a);
        let d1 = target[b] - target[a];
        if d1 > Value::ZERO {
            continue;
        }
        // d(s) = d0 + s (d1 - d0) reaches zero at s* = d0 / (d0 - d1)
        let s_star = d0 / (d0 - d1);
        let mut k = (s_star * steps).numer() / (s_star * steps).denom();
        if Value::from_int(k) < s_star * steps {
            k += 1;
        }
        let k = (k.max(1) as usize).min(n);
        first = Some(first.map_or(k, |f| f.min(k)));
    }
    first
}

/// Linear interpolation of vertex values from `g` to `target` in `n` steps.
pub fn linear_path(g: &ReebGraph, target: &[Value], n: usize) -> Result<GraphPath> {
    if n == 0 {
        return Err(Error::BadParams("a linear path needs at least one step".into()));
    }
    if target.len() != g.vertex_count() {
        return Err(Error::BadParams(format!(
            "{} target values for {} vertices",
            target.len(),
            g.vertex_count()
        )));
    }
    if let Some(step) = first_bad_step(g, target, n) {
        return Err(Error::NotMonotone { step, steps: n });
    }
    let start = g.values();
    let sup = start
        .iter()
        .zip(target)
        .map(|(&a, &b)| (a - b).abs())
        .max()
        .unwrap_or(Value::ZERO);
    let steps = Value::from_int(n as i128);
    let graphs = (0..=n)
        .map(|k| {
            let s = Value::from_int(k as i128) / steps;
            let values: Vec<Value> = start.iter().zip(target).map(|(&a, &b)| a + s * (b - a)).collect();
            g.with_values(&values)
        })
        .collect();
    GraphPath::from_graphs(graphs, vec![sup / steps; n])
}

/// `n` linear steps shrinking a segment (given by its extremes) to a point
/// at its midpoint; the last step merges the remaining segment.
fn shrink(lo: Value, hi: Value, n: usize) -> Result<GraphPath> {
    let mid = lo.midpoint(hi);
    if lo == hi {
        return GraphPath::from_graphs(vec![point(mid)], vec![]);
    }
    let steps = Value::from_int(n as i128);
    let step = (hi - lo).half() / steps;
    let mut graphs = Vec::with_capacity(n + 1);
    for k in 0..n {
        let s = Value::from_int(k as i128) / steps;
        graphs.push(segment_graph(lo + s * (mid - lo), hi - s * (hi - mid)));
    }
    graphs.push(point(mid));
    GraphPath::from_graphs(graphs, vec![step; n])
}

fn point(x: Value) -> ReebGraph {
    ReebGraph::from_values(&[x], &[])
}

fn segment_graph(lo: Value, hi: Value) -> ReebGraph {
    ReebGraph::from_values(&[lo, hi], &[(0, 1)])
}

/// Simplify `g` feature by feature, always at the smallest span left, down
/// to a segment.
fn flatten_path(g: &ReebGraph) -> Result<GraphPath> {
    g.check(true)?;
    let mut graphs = vec![g.canonicalize()?];
    let mut certs = Vec::new();
    loop {
        let current = graphs.last().expect("nonempty");
        let smallest = extended_diagram(current)?
            .points()
            .iter()
            .filter(|p| p.kind != Kind::Ext0)
            .map(|p| (p.birth - p.death).abs())
            .min();
        let Some(alpha) = smallest else { break };
        let s = simplify(current, alpha)?;
        graphs.push(s.graph);
        certs.push(s.certificate);
    }
    GraphPath::from_graphs(graphs, certs)
}

fn extremes(g: &ReebGraph) -> (Value, Value) {
    (g.min_value(), g.max_value())
}

/// From `g` to a single point: features removed in ascending order of span,
/// then the remaining segment shrunk in `n` steps.
pub fn contraction_path(g: &ReebGraph, n: usize) -> Result<GraphPath> {
    if n == 0 {
        return Err(Error::BadParams("need at least one shrink step".into()));
    }
    let flat = flatten_path(g)?;
    let (lo, hi) = extremes(&flat.steps.last().expect("nonempty").graph);
    flat.then(&shrink(lo, hi, n)?)
}

/// Contract `g1` to a segment, move the segment onto `g2`'s, and undo the
/// contraction of `g2`.
pub fn join_path(g1: &ReebGraph, g2: &ReebGraph, n: usize) -> Result<GraphPath> {
    let a = flatten_path(g1)?;
    let b = flatten_path(g2)?.reversed();
    let sa = &a.steps.last().expect("nonempty").graph;
    let sb = &b.steps[0].graph;
    let ((l1, h1), (l2, h2)) = (extremes(sa), extremes(sb));
    let middle = if l1 < h1 && l2 < h2 {
        let seg = segment_graph(l1, h1);
        let bridge = linear_path(&seg, &[l2, h2], n)?;
        // endpoints carry the actual graphs so the pieces chain
        let mut graphs: Vec<ReebGraph> = bridge.graphs().cloned().collect();
        graphs[0] = sa.clone();
        *graphs.last_mut().expect("nonempty") = sb.clone();
        GraphPath::from_graphs(graphs, bridge.certificates)?
    } else {
        let down = shrink(l1, h1, n)?;
        let up = shrink(l2, h2, n)?.reversed();
        let (m1, m2) = (l1.midpoint(h1), l2.midpoint(h2));
        let hop = GraphPath::from_graphs(vec![point(m1), point(m2)], vec![(m1 - m2).abs()])?;
        let mut p = down.then(&hop)?.then(&up)?;
        p.steps[0].graph = sa.clone();
        let last = p.steps.len() - 1;
        p.steps[last].graph = sb.clone();
        p
    };
    a.then(&middle)?.then(&b)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntrinsicEstimate {
    /// upper bound on the intrinsic functional distortion distance
    pub upper: Value,
    pub family: String,
}

/// Smallest certified length over the built-in path families.
pub fn intrinsic_upper(g1: &ReebGraph, g2: &ReebGraph) -> Result<IntrinsicEstimate> {
    g1.check(true)?;
    g2.check(true)?;
    if is_level_isomorphic(g1, g2) {
        return Ok(IntrinsicEstimate { upper: Value::ZERO, family: "isomorphic".into() });
    }
    let join = path_length(&join_path(g1, g2, 1)?, Metric::FdUpper)?.total;
    let mut best = IntrinsicEstimate { upper: join, family: "join-via-segments".into() };
    if let Some(u) = shared_structure_bound(g1, g2) {
        if u < best.upper {
            best = IntrinsicEstimate { upper: u, family: "linear".into() };
        }
    }
    Ok(best)
}

/// Target values of `g2` laid out in `g1`'s vertex order, when the two share
/// a combinatorial form.
pub fn aligned_values(g1: &ReebGraph, g2: &ReebGraph) -> Option<Vec<Value>> {
    shared_structure(g1, g2)?;
    Some(
        g1.vertices()
            .iter()
            .map(|v| g2.value(g2.index_of(v.id).expect("shared ids")))
            .collect(),
    )
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SegmentCheck {
    pub bottleneck: Value,
    pub certificate: Value,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EquivalenceReport {
    pub segments: Vec<SegmentCheck>,
    pub bottleneck_length: Value,
    pub certified_length: Value,
    pub holds: bool,
}

/// Per segment `d_B <= 2 * certificate`, and the same for the sums.
pub fn check_path_equivalence(p: &GraphPath) -> Result<EquivalenceReport> {
    let db = path_length(p, Metric::Bottleneck)?;
    let two = Value::from_int(2);
    let segments: Vec<SegmentCheck> = db
        .per_step
        .iter()
        .zip(&p.certificates)
        .map(|(&b, &c)| SegmentCheck { bottleneck: b, certificate: c, holds: b <= two * c })
        .collect();
    let certified_length: Value = p.certificates.iter().copied().sum();
    let holds = segments.iter().all(|s| s.holds) && db.total <= two * certified_length;
    Ok(EquivalenceReport {
        segments,
        bottleneck_length: db.total,
        certified_length,
        holds,
    })
}

/// Builds the available path families between two graphs and checks each.
pub fn check_strong_equivalence(g1: &ReebGraph, g2: &ReebGraph, n: usize) -> Result<Vec<(String, EquivalenceReport)>> {
    let mut out = Vec::new();
    if let Some(target) = aligned_values(g1, g2) {
        out.push(("linear".to_string(), check_path_equivalence(&linear_path(g1, &target, n)?)?));
    }
    out.push(("join-via-segments".to_string(), check_path_equivalence(&join_path(g1, g2, n)?)?));
    Ok(out)
}

/// Certificate of flattening a single graph (used by reports).
pub fn flatten_certificate(g: &ReebGraph) -> Result<Value> {
    Ok(flatten(g)?.certificate)
}
