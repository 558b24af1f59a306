//! The travel distance `d_f(x, y)`: the smallest value span (max minus min
//! of the function) over all paths joining two points.
//!
//! Points are first made vertices of a refined graph. The optimal path has
//! its minimum at some refined vertex `L`; for each candidate `L` a sweep over
//! the vertices above `L` in increasing order records, for every pair of
//! query points, the level at which they first become connected.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::graph::{GraphPoint, ReebGraph};
use crate::value::Value;

/// `graph` subdivided so that each query point is a vertex.
pub(crate) struct Refined {
    pub values: Vec<Value>,
    pub adjacency: Vec<Vec<usize>>,
    /// refined node of each query point
    pub nodes: Vec<usize>,
}

pub(crate) fn refine(g: &ReebGraph, points: &[GraphPoint]) -> Result<Refined> {
    let mut values = g.values();
    let mut on_edge: BTreeMap<usize, BTreeMap<Value, usize>> = BTreeMap::new();
    let mut nodes = Vec::with_capacity(points.len());
    for p in points {
        g.check_point(p)?;
        let node = match g.normalize_point(*p) {
            GraphPoint::Vertex(v) => v,
            GraphPoint::Edge { edge, t } => {
                let slot = on_edge.entry(edge).or_default();
                *slot.entry(t).or_insert_with(|| {
                    values.push(g.point_value(p));
                    values.len() - 1
                })
            }
        };
        nodes.push(node);
    }
    let mut adjacency = vec![Vec::new(); values.len()];
    let mut link = |a: usize, b: usize| {
        adjacency[a].push(b);
        adjacency[b].push(a);
    };
    for (e, &(a, b)) in g.edges().iter().enumerate() {
        match on_edge.get(&e) {
            None => link(a, b),
            Some(inner) => {
                let mut prev = a;
                for &n in inner.values() {
                    link(prev, n);
                    prev = n;
                }
                link(prev, b);
            }
        }
    }
    Ok(Refined {
        values,
        adjacency,
        nodes,
    })
}

fn find(parent: &mut [usize], x: usize) -> usize {
    let mut r = x;
    while parent[r] != r {
        r = parent[r];
    }
    let mut y = x;
    while parent[y] != r {
        let next = parent[y];
        parent[y] = r;
        y = next;
    }
    r
}

/// Pairwise travel distances between `points` (a symmetric matrix).
///
/// Points in different components get no finite distance; that case is
/// reported as an error.
pub fn travel_distances(g: &ReebGraph, points: &[GraphPoint]) -> Result<Vec<Vec<Value>>> {
    let r = refine(g, points)?;
    let n = r.values.len();
    let k = points.len();
    // query indices sitting on each refined node
    let mut at_node: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (q, &node) in r.nodes.iter().enumerate() {
        at_node[node].push(q);
    }
    let mut best: Vec<Vec<Option<Value>>> = vec![vec![None; k]; k];
    for (q, row) in best.iter_mut().enumerate() {
        row[q] = Some(Value::ZERO);
    }
    for qs in &at_node {
        for &a in qs {
            for &b in qs {
                best[a][b] = Some(Value::ZERO);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| r.values[a].cmp(&r.values[b]).then(a.cmp(&b)));
    let mut lows: Vec<Value> = r.values.clone();
    lows.sort();
    lows.dedup();

    let mut parent = vec![0usize; n];
    let mut members: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut active = vec![false; n];
    for &low in &lows {
        for x in 0..n {
            parent[x] = x;
            members[x].clear();
            active[x] = false;
        }
        for &x in order.iter().filter(|&&x| r.values[x] >= low) {
            active[x] = true;
            members[x] = at_node[x].clone();
            let level = r.values[x];
            for &y in &r.adjacency[x] {
                if !active[y] {
                    continue;
                }
                let (rx, ry) = (find(&mut parent, x), find(&mut parent, y));
                if rx == ry {
                    continue;
                }
                let span = level - low;
                for &a in &members[rx] {
                    for &b in &members[ry] {
                        let cur = &mut best[a][b];
                        if cur.is_none_or(|c| span < c) {
                            *cur = Some(span);
                            best[b][a] = Some(span);
                        }
                    }
                }
                let (big, small) = if members[rx].len() >= members[ry].len() {
                    (rx, ry)
                } else {
                    (ry, rx)
                };
                let moved = std::mem::take(&mut members[small]);
                members[big].extend(moved);
                parent[small] = big;
            }
        }
    }
    best.into_iter()
        .map(|row| {
            row.into_iter()
                .map(|d| d.ok_or_else(|| Error::InvalidGraph("points in different components".into())))
                .collect()
        })
        .collect()
}

/// `d_f(x, y)` for a single pair.
pub fn travel_distance(g: &ReebGraph, x: &GraphPoint, y: &GraphPoint) -> Result<Value> {
    if !g.is_connected() {
        return Err(Error::InvalidGraph("travel distance needs a connected graph".into()));
    }
    let d = travel_distances(g, &[*x, *y])?;
    Ok(d[0][1])
}
