//! Value-preserving multigraph isomorphism by backtracking.

use std::collections::HashMap;

use crate::graph::ReebGraph;

fn multiplicities(g: &ReebGraph) -> HashMap<(usize, usize), usize> {
    let mut m = HashMap::new();
    for &(a, b) in g.edges() {
        *m.entry((a.min(b), a.max(b))).or_insert(0) += 1;
    }
    m
}

fn mult(m: &HashMap<(usize, usize), usize>, a: usize, b: usize) -> usize {
    m.get(&(a.min(b), a.max(b))).copied().unwrap_or(0)
}

/// A vertex bijection `g1 -> g2` preserving values and edge multiplicities,
/// if one exists.
pub fn level_isomorphism(g1: &ReebGraph, g2: &ReebGraph) -> Option<Vec<usize>> {
    let n = g1.vertex_count();
    if n != g2.vertex_count() || g1.edge_count() != g2.edge_count() {
        return None;
    }
    let mut v1 = g1.values();
    let mut v2 = g2.values();
    v1.sort();
    v2.sort();
    if v1 != v2 {
        return None;
    }
    let signature = |g: &ReebGraph, x: usize| {
        let mut nb: Vec<_> = g.incident(x).iter().map(|&e| g.value(g.other_end(e, x))).collect();
        nb.sort();
        (g.value(x), nb)
    };
    let sig1: Vec<_> = (0..n).map(|x| signature(g1, x)).collect();
    let sig2: Vec<_> = (0..n).map(|x| signature(g2, x)).collect();
    let candidates: Vec<Vec<usize>> = (0..n)
        .map(|x| (0..n).filter(|&y| sig1[x] == sig2[y]).collect())
        .collect();
    if candidates.iter().any(|c| c.is_empty()) {
        return None;
    }
    // most constrained first, then neighbors of already placed vertices
    let mut order: Vec<usize> = Vec::with_capacity(n);
    let mut placed = vec![false; n];
    while order.len() < n {
        let next = (0..n)
            .filter(|&x| !placed[x])
            .min_by_key(|&x| {
                let attached = g1
                    .incident(x)
                    .iter()
                    .any(|&e| placed[g1.other_end(e, x)]);
                (!attached, candidates[x].len(), x)
            })
            .expect("unplaced vertex");
        placed[next] = true;
        order.push(next);
    }

    let m1 = multiplicities(g1);
    let m2 = multiplicities(g2);
    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];

    fn extend(
        depth: usize,
        order: &[usize],
        candidates: &[Vec<usize>],
        m1: &HashMap<(usize, usize), usize>,
        m2: &HashMap<(usize, usize), usize>,
        map: &mut [usize],
        used: &mut [bool],
    ) -> bool {
        if depth == order.len() {
            return true;
        }
        let x = order[depth];
        for &y in &candidates[x] {
            if used[y] {
                continue;
            }
            let consistent = order[..depth]
                .iter()
                .all(|&w| mult(m1, x, w) == mult(m2, y, map[w]));
            if !consistent {
                continue;
            }
            map[x] = y;
            used[y] = true;
            if extend(depth + 1, order, candidates, m1, m2, map, used) {
                return true;
            }
            used[y] = false;
            map[x] = usize::MAX;
        }
        false
    }

    if extend(0, &order, &candidates, &m1, &m2, &mut map, &mut used) {
        Some(map)
    } else {
        None
    }
}

pub fn is_level_isomorphic(g1: &ReebGraph, g2: &ReebGraph) -> bool {
    level_isomorphism(g1, g2).is_some()
}
