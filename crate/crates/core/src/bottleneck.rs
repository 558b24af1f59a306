//! Bottleneck distance between typed diagrams.
//!
//! Kinds never mix, so the optimum is the largest per-kind optimum. Per kind,
//! the optimal cost is one of finitely many candidates (pair distances,
//! diagonal distances, zero); a binary search over the sorted candidates
//! calls a threshold feasibility test, which is a perfect bipartite matching
//! with one diagonal slot per point of the other side.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::ReebGraph;
use crate::persistence::{extended_diagram, Diagram, DiagramPoint, Kind};
use crate::value::Value;

/// Pairs of point indices into two diagrams (in their canonical order).
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartialMatching {
    pub pairs: Vec<(usize, usize)>,
    pub unmatched_left: Vec<usize>,
    pub unmatched_right: Vec<usize>,
}

impl PartialMatching {
    /// A matching from its pairs; every other index is unmatched.
    pub fn from_pairs(d1: &Diagram, d2: &Diagram, pairs: Vec<(usize, usize)>) -> PartialMatching {
        let left: BTreeSet<usize> = pairs.iter().map(|p| p.0).collect();
        let right: BTreeSet<usize> = pairs.iter().map(|p| p.1).collect();
        PartialMatching {
            unmatched_left: (0..d1.len()).filter(|i| !left.contains(i)).collect(),
            unmatched_right: (0..d2.len()).filter(|j| !right.contains(j)).collect(),
            pairs,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BottleneckResult {
    pub value: Value,
    pub witness: PartialMatching,
}

fn check_side(len: usize, matched: &[usize], unmatched: &[usize], side: &str) -> Result<()> {
    let mut seen = vec![false; len];
    for &i in matched.iter().chain(unmatched) {
        if i >= len {
            return Err(Error::InvalidMatching(format!("{side} index {i} out of range")));
        }
        if std::mem::replace(&mut seen[i], true) {
            return Err(Error::InvalidMatching(format!("{side} index {i} used twice")));
        }
    }
    Ok(())
}

/// Largest matched `l_inf` distance or unmatched diagonal distance.
pub fn matching_cost(d1: &Diagram, d2: &Diagram, m: &PartialMatching) -> Result<Value> {
    let left: Vec<usize> = m.pairs.iter().map(|p| p.0).collect();
    let right: Vec<usize> = m.pairs.iter().map(|p| p.1).collect();
    check_side(d1.len(), &left, &m.unmatched_left, "left")?;
    check_side(d2.len(), &right, &m.unmatched_right, "right")?;
    let (p1, p2) = (d1.points(), d2.points());
    let mut cost = Value::ZERO;
    for &(i, j) in &m.pairs {
        if p1[i].kind != p2[j].kind {
            return Err(Error::InvalidMatching(format!(
                "pair ({i}, {j}) mixes {} and {}",
                p1[i].kind, p2[j].kind
            )));
        }
        cost = cost.max(p1[i].linf(&p2[j]));
    }
    let left: BTreeSet<usize> = left.into_iter().collect();
    let right: BTreeSet<usize> = right.into_iter().collect();
    for (i, p) in p1.iter().enumerate() {
        if !left.contains(&i) {
            cost = cost.max(p.diagonal_distance());
        }
    }
    for (j, p) in p2.iter().enumerate() {
        if !right.contains(&j) {
            cost = cost.max(p.diagonal_distance());
        }
    }
    Ok(cost)
}

/// Perfect matching on the threshold graph of one kind. Returns the matched
/// `(a, b)` index pairs when it exists.
fn threshold_matching(a: &[DiagramPoint], b: &[DiagramPoint], delta: Value) -> Option<Vec<(usize, usize)>> {
    let (n, m) = (a.len(), b.len());
    // left: a_0..a_n then diagonal slots of b; right: b_0..b_m then diagonal slots of a
    let size = n + m;
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); size];
    for i in 0..n {
        for j in 0..m {
            if a[i].linf(&b[j]) <= delta {
                adj[i].push(j);
            }
        }
        if a[i].diagonal_distance() <= delta {
            adj[i].push(m + i);
        }
    }
    for j in 0..m {
        let row = &mut adj[n + j];
        if b[j].diagonal_distance() <= delta {
            row.push(j);
        }
        row.extend((0..n).map(|i| m + i));
    }

    let mut owner: Vec<Option<usize>> = vec![None; size];
    fn augment(x: usize, adj: &[Vec<usize>], seen: &mut [bool], owner: &mut [Option<usize>]) -> bool {
        for &y in &adj[x] {
            if seen[y] {
                continue;
            }
            seen[y] = true;
            if owner[y].is_none_or(|z| augment(z, adj, seen, owner)) {
                owner[y] = Some(x);
                return true;
            }
        }
        false
    }
    for x in 0..size {
        let mut seen = vec![false; size];
        if !augment(x, &adj, &mut seen, &mut owner) {
            return None;
        }
    }
    let mut pairs: Vec<(usize, usize)> = (0..m)
        .filter_map(|j| owner[j].filter(|&x| x < n).map(|x| (x, j)))
        .collect();
    pairs.sort_unstable();
    Some(pairs)
}

fn split(d: &Diagram, kind: Kind) -> (Vec<DiagramPoint>, Vec<usize>) {
    d.points()
        .iter()
        .enumerate()
        .filter(|(_, p)| p.kind == kind)
        .map(|(i, p)| (*p, i))
        .unzip()
}

/// Whether some matching has cost at most `delta`.
pub fn feasible(d1: &Diagram, d2: &Diagram, delta: Value) -> bool {
    Kind::ALL.iter().all(|&k| {
        let (a, _) = split(d1, k);
        let (b, _) = split(d2, k);
        threshold_matching(&a, &b, delta).is_some()
    })
}

/// Every value the optimum of one kind can take.
pub fn candidate_values(a: &[DiagramPoint], b: &[DiagramPoint]) -> Vec<Value> {
    let mut c: Vec<Value> = vec![Value::ZERO];
    for p in a.iter().chain(b) {
        c.push(p.diagonal_distance());
    }
    for p in a {
        for q in b {
            c.push(p.linf(q));
        }
    }
    c.sort();
    c.dedup();
    c
}

fn kind_optimum(a: &[DiagramPoint], b: &[DiagramPoint]) -> (Value, Vec<(usize, usize)>) {
    let cands = candidate_values(a, b);
    // the largest candidate always admits a matching
    let (mut lo, mut hi) = (0, cands.len() - 1);
    let mut best = threshold_matching(a, b, cands[hi]).expect("largest candidate is feasible");
    while lo < hi {
        let mid = (lo + hi) / 2;
        match threshold_matching(a, b, cands[mid]) {
            Some(pairs) => {
                best = pairs;
                hi = mid;
            }
            None => lo = mid + 1,
        }
    }
    (cands[lo], best)
}

/// Exact bottleneck distance with an optimal matching.
pub fn bottleneck(d1: &Diagram, d2: &Diagram) -> BottleneckResult {
    let mut value = Value::ZERO;
    let mut pairs = Vec::new();
    for &k in &Kind::ALL {
        let (a, ia) = split(d1, k);
        let (b, ib) = split(d2, k);
        let (opt, local) = kind_optimum(&a, &b);
        value = value.max(opt);
        pairs.extend(local.into_iter().map(|(i, j)| (ia[i], ib[j])));
    }
    pairs.sort_unstable();
    BottleneckResult {
        value,
        witness: PartialMatching::from_pairs(d1, d2, pairs),
    }
}

/// Bottleneck distance between the diagrams of two graphs.
pub fn graph_bottleneck(g1: &ReebGraph, g2: &ReebGraph) -> Result<Value> {
    Ok(bottleneck(&extended_diagram(g1)?, &extended_diagram(g2)?).value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::{figure1_pair, y_graph, y_perturbed};
    use crate::value::v;
    use proptest::prelude::*;

    fn ord0(pts: &[(&str, &str)]) -> Diagram {
        Diagram::new(pts.iter().map(|(b, d)| DiagramPoint::new(Kind::Ord0, v(b), v(d))).collect())
    }

    /// Exhaustive oracle over every partial matching of same-kind points.
    fn brute(d1: &Diagram, d2: &Diagram) -> Value {
        fn go(i: usize, d1: &Diagram, d2: &Diagram, used: &mut Vec<bool>, pairs: &mut Vec<(usize, usize)>, best: &mut Option<Value>) {
            if i == d1.len() {
                let m = PartialMatching::from_pairs(d1, d2, pairs.clone());
                let c = matching_cost(d1, d2, &m).unwrap();
                if best.is_none_or(|b| c < b) {
                    *best = Some(c);
                }
                return;
            }
            go(i + 1, d1, d2, used, pairs, best);
            for j in 0..d2.len() {
                if !used[j] && d1.points()[i].kind == d2.points()[j].kind {
                    used[j] = true;
                    pairs.push((i, j));
                    go(i + 1, d1, d2, used, pairs, best);
                    pairs.pop();
                    used[j] = false;
                }
            }
        }
        let mut best = None;
        go(0, d1, d2, &mut vec![false; d2.len()], &mut Vec::new(), &mut best);
        best.unwrap()
    }

    #[test]
    fn cost_examples() {
        let a = ord0(&[("1", "2")]);
        let e = Diagram::default();
        assert_eq!(matching_cost(&a, &e, &PartialMatching::from_pairs(&a, &e, vec![])).unwrap(), v("0.5"));
        let (p, q) = (ord0(&[("0", "4")]), ord0(&[("1", "5")]));
        assert_eq!(matching_cost(&p, &q, &PartialMatching::from_pairs(&p, &q, vec![(0, 0)])).unwrap(), v("1"));
        assert_eq!(matching_cost(&p, &p, &PartialMatching::from_pairs(&p, &p, vec![(0, 0)])).unwrap(), v("0"));
    }

    #[test]
    fn invalid_matchings_are_rejected() {
        let p = ord0(&[("0", "4"), ("1", "2")]);
        let bad = PartialMatching {
            pairs: vec![(0, 0), (1, 0)],
            ..Default::default()
        };
        assert!(matching_cost(&p, &p, &bad).is_err());
        let mixed = Diagram::new(vec![DiagramPoint::new(Kind::Ext0, v("0"), v("4"))]);
        let q = ord0(&[("0", "4")]);
        assert!(matching_cost(&q, &mixed, &PartialMatching::from_pairs(&q, &mixed, vec![(0, 0)])).is_err());
    }

    #[test]
    fn bottleneck_examples() {
        let (p, q) = (ord0(&[("0", "4")]), ord0(&[("1", "5")]));
        let r = bottleneck(&p, &q);
        assert_eq!(r.value, v("1"));
        assert_eq!(r.witness.pairs, vec![(0, 0)]);
        assert_eq!(bottleneck(&ord0(&[("1", "2")]), &Diagram::default()).value, v("0.5"));
        assert!(feasible(&p, &q, v("1")));
        assert!(!feasible(&p, &q, v("0.99")));
        assert!(feasible(&p, &p, v("0")));
    }

    #[test]
    fn graph_examples() {
        let (a, b) = figure1_pair();
        assert_eq!(graph_bottleneck(&a, &b).unwrap(), v("0"));
        assert_eq!(graph_bottleneck(&a, &a).unwrap(), v("0"));
        assert_eq!(graph_bottleneck(&y_graph(), &y_perturbed()).unwrap(), v("0.05"));
    }

    fn arb_diagram() -> impl Strategy<Value = Diagram> {
        let point = (0usize..3, 0i64..20, 0i64..20).prop_map(|(k, x, y)| {
            let kind = [Kind::Ord0, Kind::Rel1, Kind::Ext0][k];
            let (lo, hi) = (x.min(y), x.max(y) + 1);
            let (b, d) = if kind == Kind::Rel1 { (hi, lo) } else { (lo, hi) };
            DiagramPoint::new(kind, Value::new(b as i128, 4), Value::new(d as i128, 4))
        });
        proptest::collection::vec(point, 0..5).prop_map(Diagram::new)
    }

    proptest! {
        #[test]
        fn matches_exhaustive_oracle(a in arb_diagram(), b in arb_diagram()) {
            let r = bottleneck(&a, &b);
            prop_assert_eq!(r.value, brute(&a, &b));
            prop_assert_eq!(matching_cost(&a, &b, &r.witness).unwrap(), r.value);
        }

        #[test]
        fn pseudo_metric(a in arb_diagram(), b in arb_diagram(), c in arb_diagram()) {
            let ab = bottleneck(&a, &b).value;
            prop_assert_eq!(ab, bottleneck(&b, &a).value);
            prop_assert_eq!(bottleneck(&a, &a).value, Value::ZERO);
            prop_assert!(bottleneck(&a, &c).value <= ab + bottleneck(&b, &c).value);
        }

        #[test]
        fn optimum_is_tight(a in arb_diagram(), b in arb_diagram()) {
            let opt = bottleneck(&a, &b).value;
            prop_assert!(feasible(&a, &b, opt));
            let mut all: Vec<Value> = Kind::ALL.iter().flat_map(|&k| {
                candidate_values(&a.of_kind(k), &b.of_kind(k))
            }).collect();
            all.sort();
            if let Some(prev) = all.into_iter().rfind(|&c| c < opt) {
                prop_assert!(!feasible(&a, &b, prev));
            }
        }
    }
}
