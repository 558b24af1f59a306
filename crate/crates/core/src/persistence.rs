//! Extended persistence diagrams of the induced map of a Reeb graph.
//!
//! The extended filtration is realized on the cone over the graph: the
//! vertices and edges enter in increasing order of value (sublevel part),
//! then the cone apex joined to every cell enters in decreasing order
//! (relative part). A standard Z2 column reduction pairs the cells; the pair
//! types give the four point classes. An elder-rule union-find computes the
//! ordinary and relative parts independently and serves as an oracle.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::ReebGraph;
use crate::value::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Kind {
    Ord0,
    Rel1,
    Ext0,
    Ext1,
}

impl Kind {
    pub const ALL: [Kind; 4] = [Kind::Ord0, Kind::Rel1, Kind::Ext0, Kind::Ext1];

    /// Whether a point of this kind may sit on the diagonal.
    pub fn admits_diagonal(self) -> bool {
        self == Kind::Ext0
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Kind::Ord0 => "Ord0",
            Kind::Rel1 => "Rel1",
            Kind::Ext0 => "Ext0",
            Kind::Ext1 => "Ext1",
        };
        f.write_str(s)
    }
}

impl FromStr for Kind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Kind> {
        match s {
            "Ord0" => Ok(Kind::Ord0),
            "Rel1" => Ok(Kind::Rel1),
            "Ext0" => Ok(Kind::Ext0),
            "Ext1" => Ok(Kind::Ext1),
            _ => Err(Error::BadParams(format!("unknown point kind {s:?}"))),
        }
    }
}

/// A diagram point; coordinates on the opposite real line are stored as plain
/// reals, the orientation is carried by `kind`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct DiagramPoint {
    pub kind: Kind,
    pub birth: Value,
    pub death: Value,
}

impl DiagramPoint {
    pub fn new(kind: Kind, birth: Value, death: Value) -> DiagramPoint {
        DiagramPoint { kind, birth, death }
    }

    /// `l_inf` distance to the diagonal.
    pub fn diagonal_distance(&self) -> Value {
        (self.birth - self.death).abs().half()
    }

    pub fn linf(&self, other: &DiagramPoint) -> Value {
        (self.birth - other.birth)
            .abs()
            .max((self.death - other.death).abs())
    }

    /// Whether the point respects the geometry of its class.
    pub fn is_well_placed(&self) -> bool {
        match self.kind {
            Kind::Ord0 => self.birth < self.death,
            Kind::Rel1 => self.birth > self.death,
            Kind::Ext0 => self.birth <= self.death,
            Kind::Ext1 => self.birth >= self.death,
        }
    }
}

impl fmt::Display for DiagramPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}", self.kind, self.birth, self.death)
    }
}

/// A multiset of typed points, kept in canonical (kind, birth, death) order.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Diagram {
    points: Vec<DiagramPoint>,
}

impl Diagram {
    pub fn new(mut points: Vec<DiagramPoint>) -> Diagram {
        points.sort();
        Diagram { points }
    }

    pub fn points(&self) -> &[DiagramPoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn of_kind(&self, kind: Kind) -> Vec<DiagramPoint> {
        self.points.iter().filter(|p| p.kind == kind).copied().collect()
    }

    pub fn count(&self, kind: Kind) -> usize {
        self.points.iter().filter(|p| p.kind == kind).count()
    }

    /// Text form: one `<kind> <birth> <death>` line per point.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for p in &self.points {
            s.push_str(&p.to_string());
            s.push('\n');
        }
        s
    }

    pub fn parse(text: &str) -> Result<Diagram> {
        let mut points = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |msg: String| Error::Parse { line: i + 1, msg };
            let parts: Vec<&str> = line.split_whitespace().collect();
            if parts.len() != 3 {
                return Err(err(format!("expected `<kind> <birth> <death>`, got {line:?}")));
            }
            let kind = parts[0].parse().map_err(|e: Error| err(e.to_string()))?;
            let birth = parts[1].parse().map_err(|e: Error| err(e.to_string()))?;
            let death = parts[2].parse().map_err(|e: Error| err(e.to_string()))?;
            points.push(DiagramPoint::new(kind, birth, death));
        }
        Ok(Diagram::new(points))
    }
}

/// Exact multiset equality of typed points.
pub fn diagram_equal(a: &Diagram, b: &Diagram) -> bool {
    a.points == b.points
}

/// A diagram point together with the graph vertices realizing its two
/// coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Feature {
    pub point: DiagramPoint,
    pub birth_vertex: usize,
    pub death_vertex: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Cell {
    Apex,
    Vertex(usize),
    Edge(usize),
    ConeVertex(usize),
    ConeEdge(usize),
}

/// All features of the (connected) graph, by matrix reduction. Pass-through
/// vertices are allowed; they only create zero-length pairs, which are dropped.
pub(crate) fn features(g: &ReebGraph) -> Vec<Feature> {
    let nv = g.vertex_count();
    let ne = g.edge_count();
    let low = |e: usize| g.edges()[e].0;
    let high = |e: usize| g.edges()[e].1;

    let mut ordinary: Vec<(Value, u8, usize, Cell)> = Vec::with_capacity(nv + ne);
    for v in 0..nv {
        ordinary.push((g.value(v), 0, v, Cell::Vertex(v)));
    }
    for e in 0..ne {
        ordinary.push((g.value(high(e)), 1, e, Cell::Edge(e)));
    }
    ordinary.sort_by_key(|a| (a.0, a.1, a.2));

    let mut relative: Vec<(Value, u8, usize, Cell)> = Vec::with_capacity(nv + ne);
    for v in 0..nv {
        relative.push((g.value(v), 1, v, Cell::ConeVertex(v)));
    }
    for e in 0..ne {
        relative.push((g.value(low(e)), 2, e, Cell::ConeEdge(e)));
    }
    relative.sort_by(|a, b| match b.0.cmp(&a.0) {
        Ordering::Equal => (a.1, a.2).cmp(&(b.1, b.2)),
        o => o,
    });

    let mut cells = vec![Cell::Apex];
    cells.extend(ordinary.iter().map(|c| c.3));
    cells.extend(relative.iter().map(|c| c.3));

    let mut pos_vertex = vec![0; nv];
    let mut pos_edge = vec![0; ne];
    let mut pos_cone_vertex = vec![0; nv];
    for (i, c) in cells.iter().enumerate() {
        match *c {
            Cell::Vertex(v) => pos_vertex[v] = i,
            Cell::Edge(e) => pos_edge[e] = i,
            Cell::ConeVertex(v) => pos_cone_vertex[v] = i,
            _ => {}
        }
    }

    let mut columns: Vec<Vec<usize>> = cells
        .iter()
        .map(|c| {
            let mut col = match *c {
                Cell::Apex | Cell::Vertex(_) => vec![],
                Cell::Edge(e) => vec![pos_vertex[low(e)], pos_vertex[high(e)]],
                Cell::ConeVertex(v) => vec![0, pos_vertex[v]],
                Cell::ConeEdge(e) => vec![
                    pos_edge[e],
                    pos_cone_vertex[low(e)],
                    pos_cone_vertex[high(e)],
                ],
            };
            col.sort_unstable();
            col
        })
        .collect();

    let mut pivot_owner: Vec<Option<usize>> = vec![None; cells.len()];
    let mut pairs = Vec::new();
    for j in 0..columns.len() {
        while let Some(&piv) = columns[j].last() {
            match pivot_owner[piv] {
                Some(k) => {
                    let other = columns[k].clone();
                    columns[j] = symmetric_difference(&columns[j], &other);
                }
                None => {
                    pivot_owner[piv] = Some(j);
                    pairs.push((piv, j));
                    break;
                }
            }
        }
    }

    let mut out = Vec::new();
    for (b, d) in pairs {
        let feature = match (cells[b], cells[d]) {
            (Cell::Vertex(a), Cell::Edge(e)) => Feature {
                point: DiagramPoint::new(Kind::Ord0, g.value(a), g.value(high(e))),
                birth_vertex: a,
                death_vertex: high(e),
            },
            (Cell::Vertex(a), Cell::ConeVertex(w)) => Feature {
                point: DiagramPoint::new(Kind::Ext0, g.value(a), g.value(w)),
                birth_vertex: a,
                death_vertex: w,
            },
            (Cell::Edge(e), Cell::ConeEdge(f)) => Feature {
                point: DiagramPoint::new(Kind::Ext1, g.value(high(e)), g.value(low(f))),
                birth_vertex: high(e),
                death_vertex: low(f),
            },
            (Cell::ConeVertex(v), Cell::ConeEdge(f)) => Feature {
                point: DiagramPoint::new(Kind::Rel1, g.value(v), g.value(low(f))),
                birth_vertex: v,
                death_vertex: low(f),
            },
            other => unreachable!("impossible pairing {other:?}"),
        };
        let p = feature.point;
        if p.birth == p.death && !p.kind.admits_diagonal() {
            continue;
        }
        out.push(feature);
    }
    out
}

fn symmetric_difference(a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

fn require_connected(g: &ReebGraph) -> Result<()> {
    g.check(true)
}

/// Matrix reduction of the extended filtration.
pub fn reduce_extended_filtration(g: &ReebGraph) -> Result<Diagram> {
    require_connected(g)?;
    Ok(Diagram::new(features(g).into_iter().map(|f| f.point).collect()))
}

/// The extended persistence diagram of the graph's induced map.
pub fn extended_diagram(g: &ReebGraph) -> Result<Diagram> {
    reduce_extended_filtration(g)
}

/// Elder-rule sublevel pairs `(birth, death, birth vertex, death vertex)`.
fn elder_pairs(values: &[Value], g: &ReebGraph) -> Vec<(Value, Value, usize, usize)> {
    let n = values.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| values[a].cmp(&values[b]).then(a.cmp(&b)));
    let mut rank = vec![0; n];
    for (r, &v) in order.iter().enumerate() {
        rank[v] = r;
    }
    let mut parent: Vec<usize> = (0..n).collect();
    // root -> vertex holding the component's minimum
    let mut oldest: Vec<usize> = (0..n).collect();
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
    let mut out = Vec::new();
    for &v in &order {
        for &e in g.incident(v) {
            let u = g.other_end(e, v);
            if rank[u] > rank[v] {
                continue;
            }
            let (ru, rv) = (find(&mut parent, u), find(&mut parent, v));
            if ru == rv {
                continue;
            }
            let (ou, ov) = (oldest[ru], oldest[rv]);
            let (elder, younger) = if rank[ou] < rank[ov] { (ou, ov) } else { (ov, ou) };
            if values[younger] < values[v] {
                out.push((values[younger], values[v], younger, v));
            }
            parent[ru] = rv;
            oldest[rv] = elder;
        }
    }
    out
}

/// Ordinary degree-0 points by the elder rule. With `flipped`, runs on `-f`
/// and returns the relative degree-1 points in original coordinates.
pub fn ord0_unionfind(g: &ReebGraph, flipped: bool) -> Vec<DiagramPoint> {
    if flipped {
        let neg: Vec<Value> = g.values().into_iter().map(|x| -x).collect();
        let mut pts: Vec<DiagramPoint> = elder_pairs(&neg, g)
            .into_iter()
            .map(|(b, d, _, _)| DiagramPoint::new(Kind::Rel1, -b, -d))
            .collect();
        pts.sort();
        pts
    } else {
        let mut pts: Vec<DiagramPoint> = elder_pairs(&g.values(), g)
            .into_iter()
            .map(|(b, d, _, _)| DiagramPoint::new(Kind::Ord0, b, d))
            .collect();
        pts.sort();
        pts
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::{cycle, figure1_pair, segment, y_graph};
    use crate::value::v;

    fn pt(kind: Kind, b: &str, d: &str) -> DiagramPoint {
        DiagramPoint::new(kind, v(b), v(d))
    }

    #[test]
    fn segment_diagram() {
        let d = extended_diagram(&segment(v("0"), v("3"))).unwrap();
        assert_eq!(d, Diagram::new(vec![pt(Kind::Ext0, "0", "3")]));
    }

    #[test]
    fn y_graph_diagram() {
        let d = extended_diagram(&y_graph()).unwrap();
        assert_eq!(
            d,
            Diagram::new(vec![pt(Kind::Ext0, "0", "3"), pt(Kind::Ord0, "1", "2")])
        );
    }

    #[test]
    fn cycle_diagram() {
        let d = extended_diagram(&cycle(v("0"), v("3"))).unwrap();
        assert_eq!(
            d,
            Diagram::new(vec![pt(Kind::Ext0, "0", "3"), pt(Kind::Ext1, "3", "0")])
        );
    }

    #[test]
    fn two_cycles_sharing_the_trunk() {
        // trunk 0-1-2-4-6-7 with chords 1-4 and 2-6
        let g = ReebGraph::from_values(
            &[v("0"), v("1"), v("2"), v("4"), v("6"), v("7")],
            &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (1, 3), (2, 4)],
        );
        let d = extended_diagram(&g).unwrap();
        assert_eq!(
            d.of_kind(Kind::Ext1),
            vec![pt(Kind::Ext1, "4", "1"), pt(Kind::Ext1, "6", "2")]
        );
        assert_eq!(d.of_kind(Kind::Ext0), vec![pt(Kind::Ext0, "0", "7")]);
    }

    #[test]
    fn cycle_with_downward_branch() {
        // cycle bottom 0 top 2, one side through a saddle at 1.5 with a branch down to 1
        let g = ReebGraph::from_values(
            &[v("0"), v("2"), v("1.5"), v("1")],
            &[(0, 1), (0, 2), (2, 1), (3, 2)],
        );
        let d = extended_diagram(&g).unwrap();
        assert_eq!(
            d,
            Diagram::new(vec![
                pt(Kind::Ord0, "1", "1.5"),
                pt(Kind::Ext0, "0", "2"),
                pt(Kind::Ext1, "2", "0"),
            ])
        );
    }

    #[test]
    fn single_vertex_is_diagonal_ext0() {
        let g = ReebGraph::from_values(&[v("2")], &[]);
        assert_eq!(
            extended_diagram(&g).unwrap(),
            Diagram::new(vec![pt(Kind::Ext0, "2", "2")])
        );
    }

    #[test]
    fn union_find_oracle_on_y() {
        let y = y_graph();
        assert_eq!(ord0_unionfind(&y, false), vec![pt(Kind::Ord0, "1", "2")]);
        assert!(ord0_unionfind(&y, true).is_empty());
        assert!(ord0_unionfind(&segment(v("0"), v("3")), false).is_empty());
        // upside-down Y: maxima at 3 and 2 joining at 1, trunk down to 0
        let flipped = ReebGraph::from_values(
            &[v("3"), v("2"), v("1"), v("0")],
            &[(0, 2), (1, 2), (2, 3)],
        );
        assert_eq!(ord0_unionfind(&flipped, true), vec![pt(Kind::Rel1, "2", "1")]);
        assert_eq!(
            extended_diagram(&flipped).unwrap().of_kind(Kind::Rel1),
            vec![pt(Kind::Rel1, "2", "1")]
        );
    }

    #[test]
    fn figure1_pair_has_equal_diagrams() {
        let (a, b) = figure1_pair();
        let (da, db) = (extended_diagram(&a).unwrap(), extended_diagram(&b).unwrap());
        assert!(diagram_equal(&da, &db));
        assert!(diagram_equal(&da, &da));
        let y = extended_diagram(&y_graph()).unwrap();
        let s = extended_diagram(&segment(v("0"), v("3"))).unwrap();
        assert!(!diagram_equal(&y, &s));
    }

    #[test]
    fn text_round_trip() {
        let d = extended_diagram(&y_graph()).unwrap();
        assert_eq!(d.to_text(), "Ord0 1 2\nExt0 0 3\n");
        assert_eq!(Diagram::parse(&d.to_text()).unwrap(), d);
        assert!(Diagram::parse("Ord9 1 2").is_err());
    }

    #[test]
    fn disconnected_input_is_rejected() {
        let g = ReebGraph::from_values(&[v("0"), v("1"), v("2"), v("3")], &[(0, 1), (2, 3)]);
        assert!(extended_diagram(&g).is_err());
    }

    #[test]
    fn matrix_reduction_agrees_with_union_find() {
        use crate::generate::{random_graph, RandomSpec};
        for seed in 0..100 {
            let g = random_graph(&RandomSpec::new(seed, 2 + (seed as usize % 8), v("0"), v("10")));
            let d = extended_diagram(&g).unwrap();
            assert_eq!(d.of_kind(Kind::Ord0), ord0_unionfind(&g, false), "seed {seed}");
            assert_eq!(d.of_kind(Kind::Rel1), ord0_unionfind(&g, true), "seed {seed}");
            assert_eq!(d.of_kind(Kind::Ext0), vec![DiagramPoint::new(Kind::Ext0, g.min_value(), g.max_value())]);
            assert_eq!(d.count(Kind::Ext1), g.betti1());
            let crit = g.critical_values();
            for p in d.points() {
                assert!(p.is_well_placed(), "{p}");
                assert!(crit.values().contains(&p.birth) && crit.values().contains(&p.death));
            }
        }
    }
}
