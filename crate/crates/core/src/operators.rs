//! Merge, simplification and the full transform.
//!
//! All three work on a tracked copy of the input: every vertex remembers the
//! range of input values of the points it stands for, and every edge the
//! ranges at its two ends. Between ends these ranges vary linearly, so the
//! largest displacement `|current - original|` is attained at a vertex. That
//! displacement bounds the sup-norm distance between the input function and
//! a function on the input space whose Reeb graph is the output, and so it
//! certifies an upper bound on the functional distortion distance.
//!
//! Tracked graphs are kept uncanonicalized (splicing two edges would break
//! the linear ranges); only the final output is canonicalized.

use std::collections::HashMap;

use log::warn;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{CriticalValues, ReebGraph, Vertex};
use crate::persistence::{features, Diagram, DiagramPoint, Kind};
use crate::value::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MergeParams {
    pub a: Value,
    pub b: Value,
}

impl MergeParams {
    pub fn new(a: Value, b: Value) -> Result<MergeParams> {
        if a > b {
            return Err(Error::BadParams(format!("merge band [{a}, {b}] is empty")));
        }
        Ok(MergeParams { a, b })
    }

    pub fn mid(&self) -> Value {
        self.a.midpoint(self.b)
    }

    fn snap(&self, x: Value) -> Value {
        if self.a <= x && x <= self.b {
            self.mid()
        } else {
            x
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransformParams {
    pub alpha: Value,
    pub anchors: CriticalValues,
}

impl TransformParams {
    pub fn new(alpha: Value, anchors: CriticalValues) -> Result<TransformParams> {
        if alpha <= Value::ZERO {
            return Err(Error::BadParams(format!("alpha must be positive, got {alpha}")));
        }
        let p = TransformParams { alpha, anchors };
        if !p.bands_disjoint() {
            warn!("merge bands of half-width 9*{alpha} overlap; applying them lowest first");
        }
        Ok(p)
    }

    /// Whether the bands `[a_i - 9 alpha, a_i + 9 alpha]` are pairwise disjoint.
    pub fn bands_disjoint(&self) -> bool {
        let width = Value::from_int(18) * self.alpha;
        self.anchors.values().windows(2).all(|w| w[1] - w[0] > width)
    }

    pub fn bands(&self) -> Vec<MergeParams> {
        let r = Value::from_int(9) * self.alpha;
        self.anchors
            .values()
            .iter()
            .map(|&c| MergeParams { a: c - r, b: c + r })
            .collect()
    }
}

/// An operator's output graph (canonical) with its distortion certificate:
/// an upper bound on the functional distortion distance to the input.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Transformed {
    pub graph: ReebGraph,
    pub certificate: Value,
}

type Range = (Value, Value);

fn hull(a: Range, b: Range) -> Range {
    (a.0.min(b.0), a.1.max(b.1))
}

fn lerp(a: Range, b: Range, s: Value) -> Range {
    widen((a.0 + s * (b.0 - a.0), a.1 + s * (b.1 - a.1)))
}

const GRID_BITS: u32 = 30;

/// Round a range outward onto a dyadic grid once its denominators grow
/// large; keeps repeated interpolation from overflowing.
fn widen(r: Range) -> Range {
    let grid = 1i128 << GRID_BITS;
    let snap = |x: Value, up: bool| {
        if x.denom() <= grid {
            return x;
        }
        let scaled = x.numer() * grid;
        let q = num_integer::Integer::div_floor(&scaled, &x.denom());
        let q = if up && q * x.denom() != scaled { q + 1 } else { q };
        Value::new(q, grid)
    };
    (snap(r.0, false), snap(r.1, true))
}

/// Where a contracted component lands: the band midpoint (as `Merge`
/// prescribes), or the centre of its original-value range clamped into the
/// band, which keeps the displacement smallest.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Placement {
    Midpoint,
    Centered,
}

#[derive(Clone, Debug)]
struct TrackedEdge {
    lo: usize,
    hi: usize,
    lo_range: Range,
    hi_range: Range,
}

#[derive(Clone, Debug)]
pub(crate) struct Tracked {
    ids: Vec<u64>,
    values: Vec<Value>,
    ranges: Vec<Range>,
    edges: Vec<TrackedEdge>,
}

impl Tracked {
    pub(crate) fn new(g: &ReebGraph) -> Tracked {
        let values = g.values();
        Tracked {
            ids: g.vertices().iter().map(|v| v.id).collect(),
            ranges: values.iter().map(|&x| (x, x)).collect(),
            edges: g
                .edges()
                .iter()
                .map(|&(lo, hi)| TrackedEdge {
                    lo,
                    hi,
                    lo_range: (values[lo], values[lo]),
                    hi_range: (values[hi], values[hi]),
                })
                .collect(),
            values,
        }
    }

    pub(crate) fn graph(&self) -> ReebGraph {
        let vertices = self
            .ids
            .iter()
            .zip(&self.values)
            .map(|(&id, &value)| Vertex { id, value })
            .collect();
        ReebGraph::from_parts(vertices, self.edges.iter().map(|e| (e.lo, e.hi)).collect())
    }

    pub(crate) fn certificate(&self) -> Value {
        self.values
            .iter()
            .zip(&self.ranges)
            .map(|(&x, &(lo, hi))| (x - lo).abs().max((x - hi).abs()))
            .max()
            .unwrap_or(Value::ZERO)
    }

    fn feature_count(&self) -> usize {
        features(&self.graph()).len()
    }

    /// Contract components of the preimage of `[a, b]`: all of them, or only
    /// the one holding `seed`.
    fn merge(&self, p: MergeParams, seed: Option<usize>, place: Placement) -> Tracked {
        let (a, b) = (p.a, p.b);
        let mut ids = self.ids.clone();
        let mut values = self.values.clone();
        let mut ranges = self.ranges.clone();
        let mut next_id = ids.iter().max().map_or(0, |m| m + 1);
        let mut cuts = vec![a];
        if b != a {
            cuts.push(b);
        }

        let mut edges = Vec::with_capacity(self.edges.len());
        for e in &self.edges {
            let (fu, fw) = (values[e.lo], values[e.hi]);
            let (mut prev, mut prev_range) = (e.lo, e.lo_range);
            for &c in cuts.iter().filter(|&&c| fu < c && c < fw) {
                let r = lerp(e.lo_range, e.hi_range, (c - fu) / (fw - fu));
                ids.push(next_id);
                next_id += 1;
                values.push(c);
                ranges.push(r);
                let n = values.len() - 1;
                edges.push(TrackedEdge { lo: prev, hi: n, lo_range: prev_range, hi_range: r });
                prev = n;
                prev_range = r;
            }
            edges.push(TrackedEdge { lo: prev, hi: e.hi, lo_range: prev_range, hi_range: e.hi_range });
        }

        let n = values.len();
        let inside = |x: usize| a <= values[x] && values[x] <= b;
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            p[x] = r;
            r
        }
        for e in &edges {
            if inside(e.lo) && inside(e.hi) {
                let (r1, r2) = (find(&mut parent, e.lo), find(&mut parent, e.hi));
                parent[r1] = r2;
            }
        }
        let target = |parent: &mut [usize], x: usize| -> Option<usize> {
            if !inside(x) {
                return None;
            }
            let r = find(parent, x);
            match seed {
                Some(s) if find(parent, s) != r => None,
                _ => Some(r),
            }
        };

        // new index for every surviving vertex and every contracted component
        let mut out_ids = Vec::new();
        let mut out_values = Vec::new();
        let mut out_ranges: Vec<Range> = Vec::new();
        let mut remap = vec![usize::MAX; n];
        let mut component_of: HashMap<usize, usize> = HashMap::new();
        for x in 0..n {
            match target(&mut parent, x) {
                None => {
                    remap[x] = out_values.len();
                    out_ids.push(ids[x]);
                    out_values.push(values[x]);
                    out_ranges.push(ranges[x]);
                }
                Some(r) => {
                    let slot = *component_of.entry(r).or_insert_with(|| {
                        out_ids.push(next_id);
                        next_id += 1;
                        out_values.push(p.mid());
                        out_ranges.push(ranges[x]);
                        out_values.len() - 1
                    });
                    out_ranges[slot] = hull(out_ranges[slot], ranges[x]);
                    remap[x] = slot;
                }
            }
        }
        let out_edges: Vec<TrackedEdge> = edges
            .into_iter()
            .filter(|e| remap[e.lo] != remap[e.hi])
            .map(|e| TrackedEdge { lo: remap[e.lo], hi: remap[e.hi], ..e })
            .collect();
        if place == Placement::Centered {
            for &slot in component_of.values() {
                // open window keeping every incident edge monotone
                let below = out_edges.iter().filter(|e| e.hi == slot).map(|e| out_values[e.lo]).max();
                let above = out_edges.iter().filter(|e| e.lo == slot).map(|e| out_values[e.hi]).min();
                let (lo, hi) = out_ranges[slot];
                let mut c = lo.midpoint(hi);
                if let Some(l) = below {
                    if c <= l {
                        c = l.midpoint(a);
                    }
                }
                if let Some(u) = above {
                    if c >= u {
                        c = u.midpoint(b);
                    }
                }
                out_values[slot] = c;
            }
        }
        Tracked {
            ids: out_ids,
            values: out_values,
            ranges: out_ranges,
            edges: out_edges,
        }
    }

    /// Contract features of span at most `alpha` (all kinds but Ext0), the
    /// shortest first, until none is left.
    fn simplify(&self, alpha: Value) -> Result<Tracked> {
        let mut t = self.clone();
        loop {
            let g = t.graph();
            let feats = features(&g);
            let Some(f) = feats
                .iter()
                .filter(|f| f.point.kind != Kind::Ext0)
                .filter(|f| (f.point.birth - f.point.death).abs() <= alpha)
                .min_by_key(|f| ((f.point.birth - f.point.death).abs(), f.point))
            else {
                return Ok(t);
            };
            let lo = f.point.birth.min(f.point.death);
            let hi = f.point.birth.max(f.point.death);
            let band = MergeParams { a: lo, b: hi };
            let before = feats.len();
            let best = [
                t.merge(band, Some(f.birth_vertex), Placement::Centered),
                t.merge(band, None, Placement::Centered),
                t.merge(band, Some(f.birth_vertex), Placement::Midpoint),
            ]
            .into_iter()
            .filter(|c| c.feature_count() < before)
            .min_by_key(|c| c.certificate());
            if let Some(next) = best {
                t = next;
                continue;
            }
            return Err(Error::InvalidGraph(format!(
                "could not remove feature {} by merging its band",
                f.point
            )));
        }
    }

    fn finish(&self) -> Transformed {
        Transformed {
            graph: self.graph().canonicalize_unchecked(),
            certificate: self.certificate(),
        }
    }
}

fn require_valid(g: &ReebGraph) -> Result<()> {
    g.check(true)
}

/// `Merge_{a,b}` with its certificate (at most `(b - a) / 2`).
pub fn merge_certified(g: &ReebGraph, p: &MergeParams) -> Result<Transformed> {
    MergeParams::new(p.a, p.b)?;
    require_valid(g)?;
    Ok(Tracked::new(g).merge(*p, None, Placement::Midpoint).finish())
}

/// Contract every component of the preimage of `[a, b]` to a vertex at
/// `(a + b) / 2`.
pub fn merge(g: &ReebGraph, p: &MergeParams) -> Result<ReebGraph> {
    merge_certified(g, p).map(|t| t.graph)
}

/// The diagram-level effect of a merge: coordinates inside `[a, b]` move to
/// the midpoint; points other than Ext0 that land on the diagonal vanish.
pub fn snap_diagram(d: &Diagram, p: &MergeParams) -> Diagram {
    Diagram::new(
        d.points()
            .iter()
            .map(|q| DiagramPoint::new(q.kind, p.snap(q.birth), p.snap(q.death)))
            .filter(|q| q.birth != q.death || q.kind.admits_diagonal())
            .collect(),
    )
}

/// `S_alpha`: removes every diagram point within `alpha / 2` of the diagonal
/// except the Ext0 point, which no simplification can remove.
pub fn simplify(g: &ReebGraph, alpha: Value) -> Result<Transformed> {
    if alpha <= Value::ZERO {
        return Err(Error::BadParams(format!("alpha must be positive, got {alpha}")));
    }
    require_valid(g)?;
    Ok(Tracked::new(g).simplify(alpha)?.finish())
}

/// Sequential merges over the given bands, lowest first.
pub fn merge_multi(g: &ReebGraph, bands: &[MergeParams]) -> Result<Transformed> {
    require_valid(g)?;
    let mut bands = bands.to_vec();
    bands.sort_by_key(|p| (p.a, p.b));
    let mut t = Tracked::new(g);
    for p in bands {
        MergeParams::new(p.a, p.b)?;
        t = t.merge(p, None, Placement::Midpoint);
    }
    Ok(t.finish())
}

/// `F_alpha`: simplify at `2 alpha`, then merge the `9 alpha` bands around
/// every anchor critical value.
pub fn full_transform(g: &ReebGraph, p: &TransformParams) -> Result<Transformed> {
    if p.alpha <= Value::ZERO {
        return Err(Error::BadParams(format!("alpha must be positive, got {}", p.alpha)));
    }
    require_valid(g)?;
    let mut t = Tracked::new(g).simplify(Value::from_int(2) * p.alpha)?;
    for band in p.bands() {
        t = t.merge(band, None, Placement::Midpoint);
    }
    Ok(t.finish())
}

/// Whether every point of `d_h` lies within `r` of a same-kind point of `d_f`.
pub fn crit_ball_check(d_h: &Diagram, d_f: &Diagram, r: Value) -> bool {
    d_h.points().iter().all(|p| {
        d_f.points()
            .iter()
            .any(|q| q.kind == p.kind && p.linf(q) <= r)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bottleneck::graph_bottleneck;
    use crate::generate::{cycle, figure1_pair, random_graph, segment, y_graph, y_perturbed, RandomSpec};
    use crate::iso::is_level_isomorphic;
    use crate::persistence::extended_diagram;
    use crate::value::v;

    fn band(a: &str, b: &str) -> MergeParams {
        MergeParams::new(v(a), v(b)).unwrap()
    }

    fn ord0(b: &str, d: &str) -> DiagramPoint {
        DiagramPoint::new(Kind::Ord0, v(b), v(d))
    }

    #[test]
    fn merge_moves_the_saddle() {
        let y = y_graph();
        let m = merge(&y, &band("1.8", "2.6")).unwrap();
        let d = extended_diagram(&m).unwrap();
        assert_eq!(d.of_kind(Kind::Ord0), vec![ord0("1", "2.2")]);
        assert_eq!(d, snap_diagram(&extended_diagram(&y).unwrap(), &band("1.8", "2.6")));
    }

    #[test]
    fn merge_removes_a_branch_inside_the_band() {
        let y = y_graph();
        let p = band("0.5", "2.5");
        let m = merge(&y, &p).unwrap();
        assert!(is_level_isomorphic(&m, &segment(v("0"), v("3"))));
        assert!(snap_diagram(&extended_diagram(&y).unwrap(), &p).of_kind(Kind::Ord0).is_empty());
    }

    #[test]
    fn merge_examples_without_effect() {
        let s = segment(v("0"), v("3"));
        assert!(is_level_isomorphic(&merge(&s, &band("1", "2")).unwrap(), &s));
        let c = cycle(v("0"), v("3"));
        let m = merge(&c, &band("-0.5", "0.5")).unwrap();
        assert!(is_level_isomorphic(&m, &c));
        assert!(MergeParams::new(v("2"), v("1")).is_err());
        assert!(snap_diagram(&Diagram::default(), &band("0", "1")).is_empty());
    }

    #[test]
    fn merge_certificate_is_half_the_width() {
        let t = merge_certified(&y_graph(), &band("1.8", "2.6")).unwrap();
        assert_eq!(t.certificate, v("0.4"));
    }

    #[test]
    fn merge_is_idempotent() {
        for seed in 0..30 {
            let g = random_graph(&RandomSpec::new(seed, 6, v("0"), v("10")));
            let p = band("3", "5.5");
            let once = merge(&g, &p).unwrap();
            assert!(is_level_isomorphic(&once, &merge(&once, &p).unwrap()), "seed {seed}");
        }
    }

    #[test]
    fn snapping_on_random_graphs() {
        for seed in 0..60 {
            let g = random_graph(&RandomSpec::new(seed, 2 + seed as usize % 7, v("0"), v("10")));
            let a = Value::new((seed as i128 * 37) % 900, 100);
            let p = MergeParams::new(a, a + Value::new(1 + (seed as i128 * 13) % 300, 100)).unwrap();
            let lhs = extended_diagram(&merge(&g, &p).unwrap()).unwrap();
            let rhs = snap_diagram(&extended_diagram(&g).unwrap(), &p);
            assert_eq!(lhs, rhs, "seed {seed} band {p:?}");
        }
    }

    #[test]
    fn simplify_examples() {
        let y = y_graph();
        let s = simplify(&y, v("1.5")).unwrap();
        assert!(is_level_isomorphic(&s.graph, &segment(v("0"), v("3"))));
        assert!(s.certificate <= v("3"));
        let same = simplify(&y, v("0.5")).unwrap();
        assert!(is_level_isomorphic(&same.graph, &y));
        assert_eq!(same.certificate, v("0"));
        let seg = segment(v("0"), v("3"));
        assert!(is_level_isomorphic(&simplify(&seg, v("10")).unwrap().graph, &seg));
        assert!(simplify(&y, v("0")).is_err());
    }

    #[test]
    fn simplify_contract_on_random_graphs() {
        for seed in 0..80 {
            let g = random_graph(&RandomSpec::new(seed, 3 + seed as usize % 6, v("0"), v("10")));
            let alpha = Value::new(50 + (seed as i128 * 71) % 400, 100);
            let s = simplify(&g, alpha).unwrap();
            let d = extended_diagram(&s.graph).unwrap();
            for p in d.points() {
                if p.kind != Kind::Ext0 {
                    assert!(p.diagonal_distance() > alpha.half(), "seed {seed}: {p}");
                }
            }
            assert!(s.certificate <= Value::from_int(2) * alpha, "seed {seed}: {}", s.certificate);
            assert!(graph_bottleneck(&g, &s.graph).unwrap() <= Value::from_int(4) * alpha);
        }
    }

    #[test]
    fn full_transform_examples() {
        let anchors = y_graph().critical_values();
        let p = TransformParams::new(v("0.1"), anchors.clone()).unwrap();
        let t = full_transform(&y_perturbed(), &p).unwrap();
        assert!(is_level_isomorphic(&t.graph, &y_graph()));
        assert!(t.certificate <= Value::from_int(22) * v("0.1"));
        let small = TransformParams::new(v("0.01"), anchors).unwrap();
        assert!(is_level_isomorphic(&full_transform(&y_graph(), &small).unwrap().graph, &y_graph()));

        let (left, right) = figure1_pair();
        let p = TransformParams::new(v("0.01"), left.critical_values()).unwrap();
        let t = full_transform(&right, &p).unwrap();
        assert_eq!(extended_diagram(&t.graph).unwrap(), extended_diagram(&left).unwrap());
        assert!(!is_level_isomorphic(&t.graph, &left));
    }

    #[test]
    fn ball_check_examples() {
        let dy = extended_diagram(&y_graph()).unwrap();
        let dp = extended_diagram(&y_perturbed()).unwrap();
        let ds = extended_diagram(&segment(v("0"), v("3"))).unwrap();
        assert!(crit_ball_check(&dy, &dy, v("0")));
        assert!(crit_ball_check(&dp, &dy, v("0.05")));
        assert!(!crit_ball_check(&dy, &ds, v("0.4")));
    }
}
