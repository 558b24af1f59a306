//! Built-in graphs and seeded random instances.

use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::ReebGraph;
use crate::value::{v, Value};

/// Single edge from `lo` to `hi`.
pub fn segment(lo: Value, hi: Value) -> ReebGraph {
    ReebGraph::from_values(&[lo, hi], &[(0, 1)]).with_name("segment")
}

/// Two vertices joined by two parallel edges.
pub fn cycle(lo: Value, hi: Value) -> ReebGraph {
    ReebGraph::from_values(&[lo, hi], &[(0, 1), (0, 1)]).with_name("cycle")
}

/// Vertices a:0, b:1, c:2, d:3 with edges a-c, b-c, c-d.
pub fn y_graph() -> ReebGraph {
    y_with(v("1"), v("2")).with_name("Y")
}

/// The Y-graph with `b` moved to 1.05 and `c` to 1.95.
pub fn y_perturbed() -> ReebGraph {
    y_with(v("1.05"), v("1.95")).with_name("Y-perturbed")
}

fn y_with(b: Value, c: Value) -> ReebGraph {
    ReebGraph::from_values(&[v("0"), b, c, v("3")], &[(0, 2), (1, 2), (2, 3)])
}

/// Trunk 0..10 with downward branches from 5 (to 3) and from 6 (to 2).
pub fn figure1_left() -> ReebGraph {
    ReebGraph::new(
        vec![(0, v("0")), (5, v("5")), (6, v("6")), (10, v("10")), (2, v("2")), (3, v("3"))],
        vec![(0, 5), (5, 6), (6, 10), (3, 5), (2, 6)],
    )
    .expect("fixed graph")
    .with_name("figure1_left")
}

/// Trunk 0..10 with one branch from 6 that itself forks at 5 into minima 2 and 3.
pub fn figure1_right() -> ReebGraph {
    ReebGraph::new(
        vec![(0, v("0")), (6, v("6")), (10, v("10")), (2, v("2")), (5, v("5")), (3, v("3"))],
        vec![(0, 6), (6, 10), (2, 5), (3, 5), (5, 6)],
    )
    .expect("fixed graph")
    .with_name("figure1_right")
}

pub fn figure1_pair() -> (ReebGraph, ReebGraph) {
    (figure1_left(), figure1_right())
}

/// `R_n`: a trunk from 1 to 2 with saddles at `1 + 2^-k` (k = 1..n), each
/// carrying a downward branch to a minimum at 1. It has `n + 2` critical
/// values.
pub fn figure5(n: usize) -> ReebGraph {
    let mut values = vec![Value::ONE, Value::from_int(2)];
    let mut edges = Vec::new();
    let mut below = 0;
    for k in (1..=n).rev() {
        let saddle = Value::ONE + Value::new(1, 1i128 << k);
        values.push(saddle);
        let s = values.len() - 1;
        values.push(Value::ONE);
        let m = values.len() - 1;
        edges.push((below, s));
        edges.push((m, s));
        below = s;
    }
    edges.push((below, 1));
    ReebGraph::from_values(&values, &edges).with_name(format!("figure5_{n}"))
}

/// `R_1, ..., R_n`.
pub fn figure5_sequence(n: usize) -> Vec<ReebGraph> {
    (1..=n).map(figure5).collect()
}

/// Parameters of a random instance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RandomSpec {
    pub seed: u64,
    pub critical: usize,
    pub lo: Value,
    pub hi: Value,
    /// most extra edges beyond a spanning tree
    pub max_extra_edges: usize,
}

impl RandomSpec {
    pub fn new(seed: u64, critical: usize, lo: Value, hi: Value) -> RandomSpec {
        RandomSpec {
            seed,
            critical,
            lo,
            hi,
            max_extra_edges: 2,
        }
    }
}

const GRID: i128 = 100;

fn grid_range(lo: Value, hi: Value) -> (i128, i128) {
    let scaled = |x: Value| (x.numer() * GRID, x.denom());
    let (ln, ld) = scaled(lo);
    let (hn, hd) = scaled(hi);
    (-Integer::div_floor(&-ln, &ld), Integer::div_floor(&hn, &hd))
}

/// Distinct grid values in `[lo, hi]` with pairwise gaps of at least
/// `(hi - lo) / (4n)`.
fn sample_levels(rng: &mut ChaCha8Rng, n: usize, lo: Value, hi: Value) -> Vec<Value> {
    let (a, b) = grid_range(lo, hi);
    let min_gap = ((b - a) / (4 * n as i128)).max(1);
    let mut picked: Vec<i128> = Vec::with_capacity(n);
    let mut attempts = 0;
    while picked.len() < n && attempts < 100_000 {
        attempts += 1;
        let k = rng.gen_range(a..=b);
        if picked.iter().all(|&p| (p - k).abs() >= min_gap) {
            picked.push(k);
        }
    }
    picked.sort_unstable();
    picked.into_iter().map(|k| Value::new(k, GRID)).collect()
}

fn random_candidate(rng: &mut ChaCha8Rng, spec: &RandomSpec) -> ReebGraph {
    let n = spec.critical.max(1);
    let levels = sample_levels(rng, n, spec.lo, spec.hi);
    // one vertex per level, occasionally a second vertex on the same level
    let mut values = levels.clone();
    for &l in &levels {
        if values.len() < 30 && rng.gen_bool(0.2) {
            values.push(l);
        }
    }
    let m = values.len();
    let mut order: Vec<usize> = (0..m).collect();
    order.shuffle(rng);
    let mut edges = Vec::new();
    for i in 1..m {
        let x = order[i];
        let candidates: Vec<usize> = order[..i]
            .iter()
            .copied()
            .filter(|&y| values[y] != values[x])
            .collect();
        let y = match candidates.choose(rng) {
            Some(&y) => y,
            None => continue,
        };
        edges.push((x, y));
    }
    let extra = rng.gen_range(0..=spec.max_extra_edges);
    for _ in 0..extra {
        let x = rng.gen_range(0..m);
        let y = rng.gen_range(0..m);
        if values[x] != values[y] {
            edges.push((x, y));
        }
    }
    ReebGraph::from_values(&values, &edges)
}

/// A valid canonical connected graph. Retries (deterministically) until the
/// graph is connected and has exactly `spec.critical` critical values; after
/// a bounded number of retries the closest connected candidate is returned.
pub fn random_graph(spec: &RandomSpec) -> ReebGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut fallback: Option<ReebGraph> = None;
    for _ in 0..200 {
        let g = random_candidate(&mut rng, spec);
        if !g.is_connected() {
            continue;
        }
        let g = g.canonicalize_unchecked();
        if g.critical_values().len() == spec.critical {
            return g.with_name(format!("random_{}", spec.seed));
        }
        if fallback.is_none() {
            fallback = Some(g);
        }
    }
    fallback
        .unwrap_or_else(|| segment(spec.lo, spec.hi))
        .with_name(format!("random_{}", spec.seed))
}

/// A named built-in instance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GeneratorSpec {
    Segment,
    Cycle,
    Y,
    YPerturbed,
    Figure1Left,
    Figure1Right,
    Figure5(usize),
    Random(RandomSpec),
}

impl FromStr for GeneratorSpec {
    type Err = Error;

    /// Accepts `segment`, `cycle`, `Y`, `Y-perturbed`, `figure1_left`,
    /// `figure1_right`, `figure5:<n>` and `random:<seed>:<critical>:<lo>:<hi>`.
    fn from_str(s: &str) -> Result<GeneratorSpec> {
        let bad = || Error::BadParams(format!("malformed generator spec {s:?}"));
        let parts: Vec<&str> = s.split(':').collect();
        let spec = match parts.as_slice() {
            ["segment"] => GeneratorSpec::Segment,
            ["cycle"] => GeneratorSpec::Cycle,
            ["Y"] | ["y"] => GeneratorSpec::Y,
            ["Y-perturbed"] | ["y-perturbed"] => GeneratorSpec::YPerturbed,
            ["figure1_left"] => GeneratorSpec::Figure1Left,
            ["figure1_right"] => GeneratorSpec::Figure1Right,
            ["figure5", n] => {
                let n: usize = n.parse().map_err(|_| bad())?;
                if n == 0 {
                    return Err(bad());
                }
                GeneratorSpec::Figure5(n)
            }
            ["random", seed, crit, lo, hi] => {
                let seed = seed.parse().map_err(|_| bad())?;
                let crit: usize = crit.parse().map_err(|_| bad())?;
                let lo: Value = lo.parse()?;
                let hi: Value = hi.parse()?;
                if crit == 0 || lo >= hi {
                    return Err(bad());
                }
                GeneratorSpec::Random(RandomSpec::new(seed, crit, lo, hi))
            }
            _ => return Err(bad()),
        };
        Ok(spec)
    }
}

impl fmt::Display for GeneratorSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GeneratorSpec::Segment => write!(f, "segment"),
            GeneratorSpec::Cycle => write!(f, "cycle"),
            GeneratorSpec::Y => write!(f, "Y"),
            GeneratorSpec::YPerturbed => write!(f, "Y-perturbed"),
            GeneratorSpec::Figure1Left => write!(f, "figure1_left"),
            GeneratorSpec::Figure1Right => write!(f, "figure1_right"),
            GeneratorSpec::Figure5(n) => write!(f, "figure5:{n}"),
            GeneratorSpec::Random(r) => {
                write!(f, "random:{}:{}:{}:{}", r.seed, r.critical, r.lo, r.hi)
            }
        }
    }
}

pub fn generate(spec: &GeneratorSpec) -> ReebGraph {
    match spec {
        GeneratorSpec::Segment => segment(v("0"), v("3")),
        GeneratorSpec::Cycle => cycle(v("0"), v("3")),
        GeneratorSpec::Y => y_graph(),
        GeneratorSpec::YPerturbed => y_perturbed(),
        GeneratorSpec::Figure1Left => figure1_left(),
        GeneratorSpec::Figure1Right => figure1_right(),
        GeneratorSpec::Figure5(n) => figure5(*n),
        GeneratorSpec::Random(r) => random_graph(r),
    }
}
