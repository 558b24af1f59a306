//! Functional distortion: correspondences between sampled graphs, the
//! distortion functional, and certified bounds on the functional distortion
//! distance.
//!
//! Upper bounds come from explicit maps evaluated on finite sample nets
//! (reported together with a sampling remainder), from the sup-norm of a
//! value change on a shared combinatorial graph, or from operator
//! certificates. Lower bounds come from the bottleneck distance and from the
//! extreme values of the two functions.

use log::debug;
use serde::{Deserialize, Serialize};

use crate::bottleneck::graph_bottleneck;
use crate::error::{Error, Result};
use crate::graph::{GraphPoint, ReebGraph};
use crate::iso::is_level_isomorphic;
use crate::operators::{simplify, Transformed};
use crate::travel::travel_distances;
use crate::value::Value;

/// A sampled pair of maps `phi: g1 -> g2`, `psi: g2 -> g1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Correspondence {
    pub samples1: Vec<GraphPoint>,
    pub phi: Vec<GraphPoint>,
    pub samples2: Vec<GraphPoint>,
    pub psi: Vec<GraphPoint>,
    /// largest value gap between consecutive samples along an edge
    pub resolution: Value,
}

/// Vertices plus points along every edge, no more than `h` apart in value;
/// every edge midpoint is included.
pub fn sample_net(g: &ReebGraph, h: Value) -> Vec<GraphPoint> {
    let mut pts: Vec<GraphPoint> = (0..g.vertex_count()).map(GraphPoint::Vertex).collect();
    pts.extend(edge_samples(g, h).into_iter().flat_map(|(_, inner)| inner));
    pts
}

/// Interior samples of each edge, in increasing value.
fn edge_samples(g: &ReebGraph, h: Value) -> Vec<(usize, Vec<GraphPoint>)> {
    (0..g.edge_count())
        .map(|e| {
            let (a, b) = g.edges()[e];
            let span = g.value(b) - g.value(a);
            let mut k = 2i128;
            while span / Value::from_int(k) > h {
                k *= 2;
            }
            let inner = (1..k)
                .map(|i| GraphPoint::Edge { edge: e, t: Value::new(i, k) })
                .collect();
            (e, inner)
        })
        .collect()
}

/// Most sample points a default net spreads over both graphs' edges.
const NET_BUDGET: i128 = 64;

/// Default sample resolution: an eighth of the smallest critical gap of the
/// two graphs (or of the value span when a graph has one critical value),
/// coarsened when that would put more than `NET_BUDGET` samples on the
/// edges. The remainder term of `fd_upper` accounts for the coarser grid.
pub fn default_resolution(g1: &ReebGraph, g2: &ReebGraph) -> Value {
    let scale = |g: &ReebGraph| {
        g.min_critical_gap()
            .unwrap_or_else(|_| (g.max_value() - g.min_value()).max(Value::ONE))
    };
    let length = |g: &ReebGraph| -> Value { g.edges().iter().map(|&(a, b)| g.value(b) - g.value(a)).sum() };
    let floor = (length(g1) + length(g2)) / Value::from_int(NET_BUDGET);
    (scale(g1).min(scale(g2)) / Value::from_int(8)).max(floor)
}

pub fn value_defect(from: &ReebGraph, to: &ReebGraph, xs: &[GraphPoint], images: &[GraphPoint]) -> Value {
    xs.iter()
        .zip(images)
        .map(|(x, y)| (from.point_value(x) - to.point_value(y)).abs())
        .max()
        .unwrap_or(Value::ZERO)
}

impl Correspondence {
    pub fn validate(&self, g1: &ReebGraph, g2: &ReebGraph) -> Result<()> {
        if self.samples1.len() != self.phi.len() || self.samples2.len() != self.psi.len() {
            return Err(Error::InvalidCorrespondence("every sample needs one image".into()));
        }
        if self.resolution <= Value::ZERO {
            return Err(Error::InvalidCorrespondence("resolution must be positive".into()));
        }
        for p in self.samples1.iter().chain(&self.psi) {
            g1.check_point(p)?;
        }
        for p in self.samples2.iter().chain(&self.phi) {
            g2.check_point(p)?;
        }
        self.check_continuity(g1, g2, &self.samples1, &self.phi)?;
        self.check_continuity(g2, g1, &self.samples2, &self.psi)
    }

    /// Consecutive samples along an edge must land on points joinable by a
    /// path of span at most their own span plus twice the value defect.
    fn check_continuity(
        &self,
        from: &ReebGraph,
        to: &ReebGraph,
        xs: &[GraphPoint],
        images: &[GraphPoint],
    ) -> Result<()> {
        let defect = value_defect(from, to, xs, images);
        let d_to = travel_distances(to, images)?;
        let mut by_edge: Vec<Vec<(Value, usize)>> = vec![Vec::new(); from.edge_count()];
        for (i, x) in xs.iter().enumerate() {
            match from.normalize_point(*x) {
                GraphPoint::Vertex(v) => {
                    for &e in from.incident(v) {
                        let t = if from.edges()[e].0 == v { Value::ZERO } else { Value::ONE };
                        by_edge[e].push((t, i));
                    }
                }
                GraphPoint::Edge { edge, t } => by_edge[edge].push((t, i)),
            }
        }
        for (e, mut seq) in by_edge.into_iter().enumerate() {
            seq.sort();
            for w in seq.windows(2) {
                let (i, j) = (w[0].1, w[1].1);
                let span = (from.point_value(&xs[i]) - from.point_value(&xs[j])).abs();
                if d_to[i][j] > span + Value::from_int(2) * defect {
                    return Err(Error::InvalidCorrespondence(format!(
                        "images of consecutive samples on edge {e} are {} apart",
                        d_to[i][j]
                    )));
                }
            }
        }
        Ok(())
    }
}

/// `max |d_f(x, x') - d_g(y, y')|` over sampled pairs of the correspondence.
pub fn distortion(g1: &ReebGraph, g2: &ReebGraph, c: &Correspondence) -> Result<Value> {
    c.validate(g1, g2)?;
    // correspondence pairs (x, y): x indexes pts1, y indexes pts2
    let mut pts1 = c.samples1.clone();
    pts1.extend(c.psi.iter().copied());
    let mut pts2 = c.phi.clone();
    pts2.extend(c.samples2.iter().copied());
    let d1 = travel_distances(g1, &pts1)?;
    let d2 = travel_distances(g2, &pts2)?;
    let n = pts1.len();
    let mut worst = Value::ZERO;
    for i in 0..n {
        for j in i + 1..n {
            worst = worst.max((d1[i][j] - d2[i][j]).abs());
        }
    }
    Ok(worst)
}

/// An upper bound evaluated on a correspondence: `sampled` is exact on the
/// samples, `remainder` accounts for points between samples.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FdUpper {
    pub distortion: Value,
    pub defect_phi: Value,
    pub defect_psi: Value,
    pub sampled: Value,
    pub remainder: Value,
}

impl FdUpper {
    pub fn bound(&self) -> Value {
        self.sampled + self.remainder
    }
}

/// `max{D/2, |f - g.phi|, |f.psi - g|}` on the samples, plus `2h`.
pub fn fd_upper(g1: &ReebGraph, g2: &ReebGraph, c: &Correspondence) -> Result<FdUpper> {
    let distortion = distortion(g1, g2, c)?;
    let defect_phi = value_defect(g1, g2, &c.samples1, &c.phi);
    let defect_psi = value_defect(g2, g1, &c.samples2, &c.psi);
    Ok(FdUpper {
        distortion,
        defect_phi,
        defect_psi,
        sampled: distortion.half().max(defect_phi).max(defect_psi),
        remainder: Value::from_int(2) * c.resolution,
    })
}

/// `d_FD >= d_B / 2`.
pub fn fd_lower(g1: &ReebGraph, g2: &ReebGraph) -> Result<Value> {
    Ok(graph_bottleneck(g1, g2)?.half())
}

/// `d_FD` is at least the mismatch of the extreme values: the global minimum
/// must map somewhere and pays its value defect.
pub fn extreme_value_lower(g1: &ReebGraph, g2: &ReebGraph) -> Value {
    (g1.min_value() - g2.min_value())
        .abs()
        .max((g1.max_value() - g2.max_value()).abs())
}

/// Identity maps on a sample net.
pub fn identity_correspondence(g: &ReebGraph, h: Value) -> Correspondence {
    let s = sample_net(g, h);
    Correspondence {
        samples1: s.clone(),
        phi: s.clone(),
        samples2: s.clone(),
        psi: s,
        resolution: h,
    }
}

/// Edge index of `g2` matching each edge of `g1` by endpoint ids, when both
/// graphs share one combinatorial form with the same edge orientations.
pub fn shared_structure(g1: &ReebGraph, g2: &ReebGraph) -> Option<Vec<usize>> {
    if g1.vertex_count() != g2.vertex_count() || g1.edge_count() != g2.edge_count() {
        return None;
    }
    let mut ids1: Vec<u64> = g1.vertices().iter().map(|v| v.id).collect();
    let mut ids2: Vec<u64> = g2.vertices().iter().map(|v| v.id).collect();
    ids1.sort_unstable();
    ids2.sort_unstable();
    if ids1 != ids2 {
        return None;
    }
    let key = |g: &ReebGraph, e: usize| {
        let (a, b) = g.edges()[e];
        (g.vertices()[a].id, g.vertices()[b].id)
    };
    let mut used = vec![false; g2.edge_count()];
    let mut map = Vec::with_capacity(g1.edge_count());
    for e in 0..g1.edge_count() {
        let k = key(g1, e);
        let f = (0..g2.edge_count()).find(|&f| !used[f] && key(g2, f) == k)?;
        used[f] = true;
        map.push(f);
    }
    Some(map)
}

fn vertex_by_id(from: &ReebGraph, to: &ReebGraph, v: usize) -> usize {
    to.index_of(from.vertices()[v].id).expect("shared vertex ids")
}

/// The natural maps between two value assignments of one combinatorial
/// graph: vertices to vertices, edge points to the same parameter.
pub fn natural_correspondence(g1: &ReebGraph, g2: &ReebGraph, h: Value) -> Result<Correspondence> {
    let forward = shared_structure(g1, g2)
        .ok_or_else(|| Error::InvalidCorrespondence("graphs do not share a combinatorial form".into()))?;
    let backward = shared_structure(g2, g1).expect("structure sharing is symmetric");
    let map = |from: &ReebGraph, to: &ReebGraph, edges: &[usize], p: &GraphPoint| match *p {
        GraphPoint::Vertex(v) => GraphPoint::Vertex(vertex_by_id(from, to, v)),
        GraphPoint::Edge { edge, t } => GraphPoint::Edge { edge: edges[edge], t },
    };
    let samples1 = sample_net(g1, h);
    let samples2 = sample_net(g2, h);
    Ok(Correspondence {
        phi: samples1.iter().map(|p| map(g1, g2, &forward, p)).collect(),
        psi: samples2.iter().map(|p| map(g2, g1, &backward, p)).collect(),
        samples1,
        samples2,
        resolution: h,
    })
}

/// Sup-norm of the value change between two assignments of one graph; an
/// exact `d_FD` upper bound (identity maps on the shared space).
pub fn shared_structure_bound(g1: &ReebGraph, g2: &ReebGraph) -> Option<Value> {
    shared_structure(g1, g2)?;
    Some(
        (0..g1.vertex_count())
            .map(|v| (g1.value(v) - g2.value(vertex_by_id(g1, g2, v))).abs())
            .max()
            .unwrap_or(Value::ZERO),
    )
}

/// Every point of `to` at the level `y` (clamped into its value range).
fn level_points(to: &ReebGraph, y: Value) -> Vec<GraphPoint> {
    let y = y.max(to.min_value()).min(to.max_value());
    let mut pts: Vec<GraphPoint> = (0..to.vertex_count())
        .filter(|&v| to.value(v) == y)
        .map(GraphPoint::Vertex)
        .collect();
    for e in 0..to.edge_count() {
        let (a, b) = to.edges()[e];
        if to.value(a) < y && y < to.value(b) {
            pts.push(to.point_at_value(e, y));
        }
    }
    pts
}

/// Greedy level-preserving projection `from -> to`: every vertex goes to
/// the first point of `to` at its level, then samples along each edge follow
/// the closest point (in travel distance) to the previous image.
fn project(from: &ReebGraph, to: &ReebGraph, h: Value) -> (Vec<GraphPoint>, Vec<GraphPoint>) {
    let mut xs = Vec::new();
    let mut images = Vec::new();
    let vertex_image: Vec<GraphPoint> = (0..from.vertex_count())
        .map(|v| level_points(to, from.value(v))[0])
        .collect();
    for v in 0..from.vertex_count() {
        xs.push(GraphPoint::Vertex(v));
        images.push(vertex_image[v]);
    }
    for (e, inner) in edge_samples(from, h) {
        let mut prev = vertex_image[from.edges()[e].0];
        for x in inner {
            let cands = level_points(to, from.point_value(&x));
            let mut query = vec![prev];
            query.extend(cands.iter().copied());
            let d = travel_distances(to, &query).expect("connected target");
            let best = (1..query.len()).min_by_key(|&i| (d[0][i], i)).expect("some level point");
            prev = query[best];
            xs.push(x);
            images.push(prev);
        }
    }
    (xs, images)
}

/// Greedy level projections in both directions.
pub fn collapse_correspondence(g1: &ReebGraph, g2: &ReebGraph, h: Value) -> Correspondence {
    let (samples1, phi) = project(g1, g2, h);
    let (samples2, psi) = project(g2, g1, h);
    Correspondence { samples1, phi, samples2, psi, resolution: h }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LowerSource {
    Bottleneck,
    CriticalStructure,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Witness {
    Isomorphism,
    SharedStructure,
    Natural,
    Collapse,
    Given,
    Operator(String),
}

/// Two-sided bounds `lower <= d_FD <= upper`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FdBoundCertificate {
    pub lower: Value,
    pub upper: Value,
    pub lower_source: LowerSource,
    pub witness: Witness,
    pub sampled: Option<FdUpper>,
}

/// Which upper-bound witness to try.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WitnessChoice {
    Natural,
    Collapse,
    Given(Correspondence),
}

fn lower_bound(g1: &ReebGraph, g2: &ReebGraph) -> Result<(Value, LowerSource)> {
    let db = fd_lower(g1, g2)?;
    let ext = extreme_value_lower(g1, g2);
    Ok(if db >= ext {
        (db, LowerSource::Bottleneck)
    } else {
        (ext, LowerSource::CriticalStructure)
    })
}

/// Certified interval for `d_FD(g1, g2)` using the chosen witness. A level
/// isomorphism always yields 0, and a shared combinatorial form always
/// yields the sup-norm of the value change, whichever is smaller.
pub fn fd_bound(g1: &ReebGraph, g2: &ReebGraph, choice: &WitnessChoice) -> Result<FdBoundCertificate> {
    g1.check(true)?;
    g2.check(true)?;
    let (lower, lower_source) = lower_bound(g1, g2)?;
    if is_level_isomorphic(g1, g2) {
        return Ok(FdBoundCertificate {
            lower,
            upper: Value::ZERO,
            lower_source,
            witness: Witness::Isomorphism,
            sampled: None,
        });
    }
    let h = default_resolution(g1, g2);
    let (c, witness) = match choice {
        WitnessChoice::Natural => (natural_correspondence(g1, g2, h)?, Witness::Natural),
        WitnessChoice::Collapse => (collapse_correspondence(g1, g2, h), Witness::Collapse),
        WitnessChoice::Given(c) => (c.clone(), Witness::Given),
    };
    let sampled = match fd_upper(g1, g2, &c) {
        Ok(u) => Some(u),
        Err(Error::InvalidCorrespondence(msg)) if !matches!(choice, WitnessChoice::Given(_)) => {
            debug!("{witness:?} witness rejected: {msg}");
            None
        }
        Err(e) => return Err(e),
    };
    let join = join_bound(g1, g2)?;
    let mut cert = FdBoundCertificate {
        lower,
        upper: join,
        lower_source,
        witness: Witness::Operator("simplify-join".into()),
        sampled,
    };
    if let Some(u) = sampled {
        if u.bound() <= cert.upper {
            cert.upper = u.bound();
            cert.witness = witness;
        }
    }
    if let Some(u) = shared_structure_bound(g1, g2) {
        if u < cert.upper {
            cert.upper = u;
            cert.witness = Witness::SharedStructure;
        }
    }
    Ok(cert)
}

/// Operator-certified bound: simplify both graphs down to a segment (or a
/// point), then join the two by moving their extremes.
pub fn join_bound(g1: &ReebGraph, g2: &ReebGraph) -> Result<Value> {
    let (s1, s2) = (flatten(g1)?, flatten(g2)?);
    let join = (s1.graph.min_value() - s2.graph.min_value())
        .abs()
        .max((s1.graph.max_value() - s2.graph.max_value()).abs());
    Ok(s1.certificate + join + s2.certificate)
}

/// Remove every feature but the Ext0 point.
pub fn flatten(g: &ReebGraph) -> Result<Transformed> {
    let span = (g.max_value() - g.min_value()).max(Value::ONE);
    simplify(g, span)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::{figure1_pair, segment, y_graph, y_perturbed};
    use crate::value::v;

    #[test]
    fn identity_has_zero_distortion() {
        let y = y_graph();
        let c = identity_correspondence(&y, v("0.125"));
        assert_eq!(distortion(&y, &y, &c).unwrap(), v("0"));
        assert_eq!(fd_upper(&y, &y, &c).unwrap().sampled, v("0"));
        let s = segment(v("0"), v("3"));
        let c = natural_correspondence(&s, &s, v("0.25")).unwrap();
        assert_eq!(distortion(&s, &s, &c).unwrap(), v("0"));
    }

    #[test]
    fn y_against_segment_by_collapse() {
        let (y, s) = (y_graph(), segment(v("0"), v("3")));
        // vertex samples only: phi collapses the branch, psi is the inclusion
        let c = Correspondence {
            samples1: (0..4).map(GraphPoint::Vertex).collect(),
            phi: vec![
                GraphPoint::Vertex(0),
                s.point_at_value(0, v("1")),
                s.point_at_value(0, v("2")),
                GraphPoint::Vertex(1),
            ],
            samples2: vec![GraphPoint::Vertex(0), GraphPoint::Vertex(1)],
            psi: vec![GraphPoint::Vertex(0), GraphPoint::Vertex(3)],
            resolution: v("3"),
        };
        assert_eq!(distortion(&y, &s, &c).unwrap(), v("1"));
        let u = fd_upper(&y, &s, &c).unwrap();
        assert_eq!((u.sampled, u.defect_phi, u.defect_psi), (v("0.5"), v("0"), v("0")));

        let collapse = collapse_correspondence(&y, &s, v("0.125"));
        let u = fd_upper(&y, &s, &collapse).unwrap();
        assert_eq!(u.sampled, v("0.5"));
        assert_eq!(u.remainder, v("0.25"));
    }

    #[test]
    fn perturbed_y_natural_bound() {
        let (y, p) = (y_graph(), y_perturbed());
        let c = natural_correspondence(&y, &p, v("0.125")).unwrap();
        let u = fd_upper(&y, &p, &c).unwrap();
        assert_eq!(u.defect_phi, v("0.05"));
        assert!(u.distortion <= v("0.1"));
        assert!(u.sampled <= v("0.05"));
        let cert = fd_bound(&y, &p, &WitnessChoice::Natural).unwrap();
        assert_eq!(cert.upper, v("0.05"));
        assert_eq!(fd_lower(&y, &p).unwrap(), v("0.025"));
        assert!(cert.lower <= cert.upper);
    }

    #[test]
    fn lower_bounds() {
        let (a, b) = figure1_pair();
        assert_eq!(fd_lower(&a, &b).unwrap(), v("0"));
        assert_eq!(fd_lower(&a, &a).unwrap(), v("0"));
        assert_eq!(extreme_value_lower(&segment(v("0"), v("3")), &segment(v("1"), v("3"))), v("1"));
    }

    #[test]
    fn figure1_certificate_is_consistent() {
        let (a, b) = figure1_pair();
        let cert = fd_bound(&a, &b, &WitnessChoice::Collapse).unwrap();
        assert!(cert.lower <= cert.upper);
        assert!(cert.upper > v("0"));
        let iso = fd_bound(&a, &a, &WitnessChoice::Collapse).unwrap();
        assert_eq!(iso.upper, v("0"));
    }

    #[test]
    fn broken_correspondences_are_rejected() {
        let y = y_graph();
        let mut c = identity_correspondence(&y, v("0.5"));
        c.phi.pop();
        assert!(distortion(&y, &y, &c).is_err());
        // tear one sample across to the parallel edge at the same level
        let cy = crate::generate::cycle(v("0"), v("3"));
        let mut c = identity_correspondence(&cy, v("0.25"));
        let i = c.samples1.iter().position(|p| *p == GraphPoint::Edge { edge: 0, t: v("0.5") }).unwrap();
        c.phi[i] = GraphPoint::Edge { edge: 1, t: v("0.5") };
        assert!(c.validate(&cy, &cy).is_err());
        assert!(natural_correspondence(&y, &segment(v("0"), v("3")), v("1")).is_err());
    }
}
