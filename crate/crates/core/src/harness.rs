//! Named experiment suites and the helpers they share.
//!
//! Every trial draws from its own generator seeded by `(seed, trial)`, so a
//! report depends only on the configuration.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::str::FromStr;

use log::debug;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::bottleneck::graph_bottleneck;
use crate::distortion::{fd_bound, shared_structure_bound, WitnessChoice};
use crate::error::{Error, Result};
use crate::generate::{figure1_pair, figure5, random_graph, segment, cycle, y_graph, y_perturbed, RandomSpec};
use crate::graph::{ReebGraph, Vertex};
use crate::iso::is_level_isomorphic;
use crate::operators::{full_transform, merge_certified, simplify, snap_diagram, MergeParams, TransformParams};
use crate::paths::{aligned_values, check_path_equivalence, contraction_path, intrinsic_upper, linear_path};
use crate::persistence::{diagram_equal, extended_diagram, Kind};
use crate::value::Value;

/// Experiment parameters.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExperimentConfig {
    pub seed: u64,
    /// `None` uses each experiment's default count
    pub trials: Option<usize>,
    /// locality constant, in `(0, 1/22]`
    #[serde(rename = "K")]
    pub k: Value,
    /// epsilon as a fraction of `a_f / (8 (1 + 22 K))`, in `(0, 1)`
    pub eps_frac: Value,
    pub min_critical: usize,
    pub max_critical: usize,
    pub lo: Value,
    pub hi: Value,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            seed: 1,
            trials: None,
            k: Value::new(1, 22),
            eps_frac: Value::new(1, 2),
            min_critical: 3,
            max_critical: 8,
            lo: Value::ZERO,
            hi: Value::from_int(10),
        }
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::BadParams(m));
        if self.k <= Value::ZERO || self.k > Value::new(1, 22) {
            return bad(format!("K = {} is outside (0, 1/22]", self.k));
        }
        if self.eps_frac <= Value::ZERO || self.eps_frac >= Value::ONE {
            return bad(format!("eps-frac = {} is outside (0, 1)", self.eps_frac));
        }
        if self.min_critical < 2 || self.min_critical > self.max_critical || self.max_critical > 20 {
            return bad(format!("critical-value bounds {}..={} not usable", self.min_critical, self.max_critical));
        }
        if self.lo >= self.hi {
            return bad(format!("value range [{}, {}] is empty", self.lo, self.hi));
        }
        if self.trials == Some(0) {
            return bad("trials must be positive".into());
        }
        Ok(())
    }

    fn trials_or(&self, default: usize) -> usize {
        self.trials.unwrap_or(default)
    }

    fn rng(&self, trial: usize) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(trial as u64))
    }

    fn random(&self, rng: &mut ChaCha8Rng) -> ReebGraph {
        let critical = rng.gen_range(self.min_critical..=self.max_critical);
        random_graph(&RandomSpec::new(rng.gen(), critical, self.lo, self.hi))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Experiment {
    Stability,
    Snapping,
    SimplifyContract,
    Recovery,
    Figure1,
    Figure5,
    LowerboundConsistency,
    PathEquivalence,
}

impl Experiment {
    pub const ALL: [Experiment; 8] = [
        Experiment::Stability,
        Experiment::Snapping,
        Experiment::SimplifyContract,
        Experiment::Recovery,
        Experiment::Figure1,
        Experiment::Figure5,
        Experiment::LowerboundConsistency,
        Experiment::PathEquivalence,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Experiment::Stability => "stability",
            Experiment::Snapping => "snapping",
            Experiment::SimplifyContract => "simplify-contract",
            Experiment::Recovery => "recovery",
            Experiment::Figure1 => "figure1",
            Experiment::Figure5 => "figure5",
            Experiment::LowerboundConsistency => "lowerbound-consistency",
            Experiment::PathEquivalence => "path-equivalence",
        }
    }

    fn default_trials(self) -> usize {
        match self {
            Experiment::Stability => 200,
            Experiment::Snapping | Experiment::SimplifyContract | Experiment::LowerboundConsistency => 100,
            Experiment::Recovery => 50,
            Experiment::PathEquivalence => 20,
            Experiment::Figure1 | Experiment::Figure5 => 1,
        }
    }
}

impl FromStr for Experiment {
    type Err = Error;

    fn from_str(s: &str) -> Result<Experiment> {
        Experiment::ALL
            .into_iter()
            .find(|e| e.name() == s)
            .ok_or_else(|| Error::UnknownExperiment(s.to_string()))
    }
}

/// Outcome of one trial. `vacuous` trials did not meet the premise of the
/// check and pass trivially.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TrialRecord {
    pub experiment: String,
    pub trial: usize,
    pub pass: bool,
    pub vacuous: bool,
    pub values: BTreeMap<String, String>,
}

impl TrialRecord {
    fn new(e: Experiment, trial: usize) -> TrialRecord {
        TrialRecord {
            experiment: e.name().to_string(),
            trial,
            pass: true,
            vacuous: false,
            values: BTreeMap::new(),
        }
    }

    fn set(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.values.insert(key.to_string(), value.to_string());
        self
    }

    /// Records `ok` under `key` and folds it into the verdict.
    fn check(&mut self, key: &str, ok: bool) -> &mut Self {
        self.pass &= ok;
        self.set(key, ok)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub experiment: String,
    pub trials: usize,
    pub passed: usize,
    pub non_vacuous: usize,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExperimentReport {
    pub experiment: Experiment,
    pub records: Vec<TrialRecord>,
}

#[derive(Serialize)]
#[serde(tag = "type", rename_all = "lowercase")]
enum Line<'a> {
    Trial(&'a TrialRecord),
    Summary(&'a Summary),
}

impl ExperimentReport {
    pub fn summary(&self) -> Summary {
        let passed = self.records.iter().filter(|r| r.pass).count();
        Summary {
            experiment: self.experiment.name().to_string(),
            trials: self.records.len(),
            passed,
            non_vacuous: self.records.iter().filter(|r| !r.vacuous).count(),
            pass: passed == self.records.len(),
        }
    }

    pub fn all_passed(&self) -> bool {
        self.records.iter().all(|r| r.pass)
    }

    /// One JSON object per line: every trial, then a summary.
    pub fn to_records(&self) -> String {
        let mut out = String::new();
        for r in &self.records {
            writeln!(out, "{}", serde_json::to_string(&Line::Trial(r)).expect("serializable")).unwrap();
        }
        let s = self.summary();
        writeln!(out, "{}", serde_json::to_string(&Line::Summary(&s)).expect("serializable")).unwrap();
        out
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for r in &self.records {
            let verdict = match (r.pass, r.vacuous) {
                (false, _) => "FAIL",
                (true, true) => "pass (vacuous)",
                (true, false) => "pass",
            };
            let kv: Vec<String> = r.values.iter().map(|(k, v)| format!("{k}={v}")).collect();
            writeln!(out, "{} #{}: {} {}", r.experiment, r.trial, verdict, kv.join(" ")).unwrap();
        }
        let s = self.summary();
        writeln!(
            out,
            "{}: {}/{} passed ({} non-vacuous) {}",
            s.experiment,
            s.passed,
            s.trials,
            s.non_vacuous,
            if s.pass { "PASS" } else { "FAIL" }
        )
        .unwrap();
        out
    }
}

/// Sizes and critical structure of a graph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GraphStats {
    pub vertices: usize,
    pub edges: usize,
    pub betti1: usize,
    pub critical_values: Vec<Value>,
    /// smallest gap between consecutive critical values
    pub a_f: Option<Value>,
}

pub fn stats(g: &ReebGraph) -> GraphStats {
    let crit = g.critical_values();
    GraphStats {
        vertices: g.vertex_count(),
        edges: g.edge_count(),
        betti1: g.betti1(),
        a_f: crit.min_gap().ok(),
        critical_values: crit.values().to_vec(),
    }
}

impl GraphStats {
    pub fn to_text(&self) -> String {
        let crit: Vec<String> = self.critical_values.iter().map(Value::to_string).collect();
        format!(
            "V={} E={} b1={} critical=[{}] a_f={}\n",
            self.vertices,
            self.edges,
            self.betti1,
            crit.join(", "),
            self.a_f.map_or("-".to_string(), |a| a.to_string())
        )
    }
}

/// Moves every vertex by at most `delta` while keeping each edge strictly
/// increasing in the same direction. Offsets are multiples of `delta / 16`;
/// the returned value is the realized sup-norm displacement.
pub fn jitter(g: &ReebGraph, delta: Value, rng: &mut impl Rng) -> (ReebGraph, Value) {
    if delta <= Value::ZERO {
        return (g.clone(), Value::ZERO);
    }
    let unit = delta / Value::from_int(16);
    let mut scale = 16i128;
    loop {
        for _ in 0..32 {
            let values: Vec<Value> = g
                .values()
                .into_iter()
                .map(|x| x + unit * Value::from_int(rng.gen_range(-scale..=scale)))
                .collect();
            let keeps_order = g.edges().iter().all(|&(a, b)| values[a] < values[b]);
            if keeps_order {
                let sup = g
                    .values()
                    .iter()
                    .zip(&values)
                    .map(|(&x, &y)| (x - y).abs())
                    .max()
                    .unwrap_or(Value::ZERO);
                return (g.with_values(&values), sup);
            }
        }
        if scale == 0 {
            return (g.clone(), Value::ZERO);
        }
        scale /= 2;
    }
}

/// Subdivides edge `e` at its midpoint and hangs a leaf `height` below
/// (or above, when `up`) the new vertex.
pub fn attach_branch(g: &ReebGraph, e: usize, height: Value, up: bool) -> ReebGraph {
    let (a, b) = g.edges()[e];
    let mid = g.value(a).midpoint(g.value(b));
    let next_id = g.vertices().iter().map(|v| v.id).max().unwrap_or(0) + 1;
    let mut vertices: Vec<Vertex> = g.vertices().to_vec();
    vertices.push(Vertex { id: next_id, value: mid });
    let leaf = if up { mid + height } else { mid - height };
    vertices.push(Vertex { id: next_id + 1, value: leaf });
    let (m, l) = (vertices.len() - 2, vertices.len() - 1);
    let mut edges: Vec<(usize, usize)> = g.edges().to_vec();
    edges[e] = (a, m);
    edges.push((m, b));
    edges.push((m, l));
    ReebGraph::from_parts(vertices, edges)
}

/// A grid value in `[lo, hi]` with denominator 100.
fn grid_value(rng: &mut impl Rng, lo: Value, hi: Value) -> Value {
    let a = (lo * Value::from_int(100)).numer() / (lo * Value::from_int(100)).denom();
    let b = (hi * Value::from_int(100)).numer() / (hi * Value::from_int(100)).denom();
    Value::new(rng.gen_range(a..=b), 100)
}

pub fn run_experiment(name: &str, config: &ExperimentConfig) -> Result<ExperimentReport> {
    let experiment: Experiment = name.parse()?;
    run(experiment, config)
}

pub fn run(experiment: Experiment, config: &ExperimentConfig) -> Result<ExperimentReport> {
    config.validate()?;
    let trials = config.trials_or(experiment.default_trials());
    let records = match experiment {
        Experiment::Figure1 => vec![figure1_trial()?],
        Experiment::Figure5 => vec![figure5_trial(8)?],
        _ => (0..trials)
            .map(|t| {
                let mut rng = config.rng(t);
                let mut r = TrialRecord::new(experiment, t);
                match experiment {
                    Experiment::Stability => stability_trial(config, &mut rng, &mut r),
                    Experiment::Snapping => snapping_trial(config, &mut rng, &mut r),
                    Experiment::SimplifyContract => simplify_trial(config, &mut rng, &mut r),
                    Experiment::Recovery => recovery_trial(config, &mut rng, &mut r, t),
                    Experiment::LowerboundConsistency => lowerbound_trial(config, &mut rng, &mut r, t),
                    Experiment::PathEquivalence => path_trial(config, &mut rng, &mut r),
                    Experiment::Figure1 | Experiment::Figure5 => unreachable!(),
                }?;
                debug!("{} trial {t}: pass={}", experiment.name(), r.pass);
                Ok(r)
            })
            .collect::<Result<Vec<_>>>()?,
    };
    Ok(ExperimentReport { experiment, records })
}

fn stability_trial(c: &ExperimentConfig, rng: &mut ChaCha8Rng, r: &mut TrialRecord) -> Result<()> {
    let g = c.random(rng);
    let delta = grid_value(rng, Value::new(1, 100), Value::from_int(2));
    let (h, sup) = jitter(&g, delta, rng);
    let db = graph_bottleneck(&g, &h)?;
    r.set("delta", delta).set("sup", sup).set("d_B", db);
    r.check("d_B<=sup", db <= sup && sup <= delta);
    Ok(())
}

fn snapping_trial(c: &ExperimentConfig, rng: &mut ChaCha8Rng, r: &mut TrialRecord) -> Result<()> {
    let g = c.random(rng);
    let x = grid_value(rng, c.lo, c.hi);
    let y = grid_value(rng, c.lo, c.hi);
    let p = MergeParams::new(x.min(y), x.max(y))?;
    let merged = merge_certified(&g, &p)?;
    let lhs = extended_diagram(&merged.graph)?;
    let rhs = snap_diagram(&extended_diagram(&g)?, &p);
    r.set("a", p.a).set("b", p.b).set("points", lhs.len());
    r.check("snapped", diagram_equal(&lhs, &rhs));
    Ok(())
}

fn simplify_trial(c: &ExperimentConfig, rng: &mut ChaCha8Rng, r: &mut TrialRecord) -> Result<()> {
    let g = c.random(rng);
    let alpha = grid_value(rng, Value::new(1, 100), (c.hi - c.lo) / Value::from_int(4));
    let s = simplify(&g, alpha)?;
    let d = extended_diagram(&s.graph)?;
    let clear = d
        .points()
        .iter()
        .all(|p| p.kind == Kind::Ext0 || p.diagonal_distance() > alpha.half());
    let db = graph_bottleneck(&g, &s.graph)?;
    let two = Value::from_int(2);
    r.set("alpha", alpha).set("certificate", s.certificate).set("d_B", db);
    r.check("offset_clear", clear)
        .check("d_B<=4alpha", db <= two * two * alpha)
        .check("certificate<=2alpha", s.certificate <= two * alpha);
    Ok(())
}

fn recovery_trial(c: &ExperimentConfig, rng: &mut ChaCha8Rng, r: &mut TrialRecord, t: usize) -> Result<()> {
    let f = c.random(rng);
    let a_f = f.min_critical_gap()?;
    let eps = c.eps_frac * a_f / (Value::from_int(8) * (Value::ONE + Value::from_int(22) * c.k));
    let alpha = c.k * eps;
    // two in three trials stay near the recovery regime, the rest use the
    // full epsilon budget
    let delta = if t % 3 == 2 { eps } else { alpha.half() };
    let (j, sup) = jitter(&f, delta, rng);
    // identity maps certify the jitter; a small branch is certified by the
    // simplification that removes it again
    let (g, upper) = if t % 4 == 1 && j.edge_count() > 0 {
        let e = rng.gen_range(0..j.edge_count());
        let height = alpha * Value::new(3, 4);
        let g = attach_branch(&j, e, height, rng.gen_bool(0.5));
        let s = simplify(&g, height)?;
        let upper = if is_level_isomorphic(&s.graph, &j.canonicalize()?) {
            sup + s.certificate
        } else {
            fd_bound(&f, &g, &WitnessChoice::Collapse)?.upper
        };
        (g, upper)
    } else {
        (j, sup)
    };
    let db = graph_bottleneck(&f, &g)?;
    r.set("a_f", a_f).set("eps", eps).set("alpha", alpha).set("jitter", sup);
    r.set("fd_upper", upper).set("d_B", db);
    r.vacuous = !(upper <= eps && db < alpha);
    if r.vacuous {
        return Ok(());
    }
    let p = TransformParams::new(alpha, f.critical_values())?;
    let out = full_transform(&g, &p)?;
    r.check("isomorphic", is_level_isomorphic(&out.graph, &f));
    Ok(())
}

fn figure1_trial() -> Result<TrialRecord> {
    let mut r = TrialRecord::new(Experiment::Figure1, 0);
    let (a, b) = figure1_pair();
    let db = graph_bottleneck(&a, &b)?;
    let iso = is_level_isomorphic(&a, &b);
    let est = intrinsic_upper(&a, &b)?;
    r.set("d_B", db).set("isomorphic", iso).set("intrinsic_upper", est.upper);
    r.check("diagrams_equal", diagram_equal(&extended_diagram(&a)?, &extended_diagram(&b)?))
        .check("d_B=0", db.is_zero())
        .check("not_isomorphic", !iso)
        .check("upper>0", est.upper > Value::ZERO);
    Ok(r)
}

fn figure5_trial(n: usize) -> Result<TrialRecord> {
    let mut r = TrialRecord::new(Experiment::Figure5, 0);
    let graphs: Vec<ReebGraph> = (1..=n).map(figure5).collect();
    let counts: Vec<usize> = graphs.iter().map(|g| g.critical_values().len()).collect();
    let counts_ok = counts.iter().enumerate().all(|(i, &c)| c == i + 3);
    let dbs = graphs
        .windows(2)
        .map(|w| graph_bottleneck(&w[0], &w[1]))
        .collect::<Result<Vec<_>>>()?;
    let decreasing = dbs.windows(2).all(|w| w[1] < w[0]);
    // R_{k+1} adds a branch of height 2^-(k+1)
    let bounded = dbs.iter().enumerate().all(|(i, &d)| d <= Value::new(1, 1i128 << (i + 2)));
    let fmt = |xs: Vec<String>| xs.join(",");
    r.set("critical_counts", fmt(counts.iter().map(usize::to_string).collect()));
    r.set("d_B", fmt(dbs.iter().map(Value::to_string).collect()));
    r.check("counts", counts_ok).check("decreasing", decreasing).check("bounded", bounded);
    Ok(r)
}

/// Pairs with a certified `d_FD` upper bound, cycling through the sources.
fn certified_pair(c: &ExperimentConfig, rng: &mut ChaCha8Rng, t: usize) -> Result<(ReebGraph, ReebGraph, Value, &'static str)> {
    let g = c.random(rng);
    Ok(match t % 4 {
        0 => {
            let delta = grid_value(rng, Value::new(1, 100), Value::ONE);
            let (h, _) = jitter(&g, delta, rng);
            let u = shared_structure_bound(&g, &h).expect("jitter keeps structure");
            (g, h, u, "shared-structure")
        }
        1 => {
            let alpha = grid_value(rng, Value::new(1, 100), Value::from_int(2));
            let s = simplify(&g, alpha)?;
            (g, s.graph, s.certificate, "simplify")
        }
        2 => {
            let x = grid_value(rng, c.lo, c.hi);
            let y = grid_value(rng, c.lo, c.hi);
            let m = merge_certified(&g, &MergeParams::new(x.min(y), x.max(y))?)?;
            (g, m.graph, m.certificate, "merge")
        }
        _ => {
            let h = c.random(rng);
            let u = fd_bound(&g, &h, &WitnessChoice::Collapse)?.upper;
            (g, h, u, "fd_bound")
        }
    })
}

/// Named pairs built into the library.
pub fn builtin_pairs() -> Vec<(String, ReebGraph, ReebGraph)> {
    let (a, b) = figure1_pair();
    let s = segment(Value::ZERO, Value::from_int(3));
    let mut out = vec![
        ("figure1".to_string(), a, b),
        ("Y~Y-perturbed".to_string(), y_graph(), y_perturbed()),
        ("Y~segment".to_string(), y_graph(), s.clone()),
        ("cycle~segment".to_string(), cycle(Value::ZERO, Value::from_int(3)), s),
    ];
    for n in 1..8 {
        out.push((format!("figure5_{n}~figure5_{}", n + 1), figure5(n), figure5(n + 1)));
    }
    out
}

fn lowerbound_trial(c: &ExperimentConfig, rng: &mut ChaCha8Rng, r: &mut TrialRecord, t: usize) -> Result<()> {
    let (g, h, u, source) = certified_pair(c, rng, t)?;
    let db = graph_bottleneck(&g, &h)?;
    r.set("source", source).set("upper", u).set("d_B", db);
    r.check("d_B<=2U", db <= Value::from_int(2) * u);
    if t == 0 {
        for (name, g, h) in builtin_pairs() {
            let u = fd_bound(&g, &h, &WitnessChoice::Collapse)?.upper;
            let db = graph_bottleneck(&g, &h)?;
            r.set(&format!("{name}.upper"), u);
            r.check(&format!("{name}.d_B<=2U"), db <= Value::from_int(2) * u);
        }
    }
    Ok(())
}

fn path_trial(c: &ExperimentConfig, rng: &mut ChaCha8Rng, r: &mut TrialRecord) -> Result<()> {
    let g = c.random(rng);
    let delta = grid_value(rng, Value::new(1, 100), Value::ONE);
    let (h, _) = jitter(&g, delta, rng);
    let target = aligned_values(&g, &h).expect("jitter keeps structure");
    let (mut lin_prev, mut con_prev) = (Value::ZERO, Value::ZERO);
    let (mut lin_mono, mut con_mono, mut segs) = (true, true, true);
    for n in [2, 4, 8, 16] {
        let lin = check_path_equivalence(&linear_path(&g, &target, n)?)?;
        let con = check_path_equivalence(&contraction_path(&g, n)?)?;
        segs &= lin.holds && con.holds;
        if !lin.holds || !con.holds {
            r.set(&format!("failed{n}"), if lin.holds { "contraction" } else { "linear" });
        }
        lin_mono &= lin.bottleneck_length >= lin_prev;
        con_mono &= con.bottleneck_length >= con_prev;
        lin_prev = lin.bottleneck_length;
        con_prev = con.bottleneck_length;
        r.set(&format!("linear{n}.d_B"), lin.bottleneck_length);
        r.set(&format!("contraction{n}.d_B"), con.bottleneck_length);
        r.set(&format!("contraction{n}.fd"), con.certified_length);
    }
    r.check("segments", segs).check("linear_monotone", lin_mono).check("contraction_monotone", con_mono);
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::value::v;

    #[test]
    fn config_bounds() {
        let mut c = ExperimentConfig::default();
        c.validate().unwrap();
        c.k = v("0.05");
        assert!(c.validate().is_err());
        c.k = Value::new(1, 22);
        c.eps_frac = Value::ONE;
        assert!(c.validate().is_err());
        assert!(matches!(run_experiment("nope", &ExperimentConfig::default()), Err(Error::UnknownExperiment(_))));
    }

    #[test]
    fn stats_examples() {
        let s = stats(&y_graph());
        assert_eq!((s.vertices, s.edges, s.betti1, s.a_f), (4, 3, 0, Some(v("1"))));
        assert_eq!(stats(&cycle(v("0"), v("1"))).betti1, 1);
    }

    #[test]
    fn jitter_keeps_structure() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for seed in 0..30 {
            let g = random_graph(&RandomSpec::new(seed, 5, v("0"), v("10")));
            let (h, sup) = jitter(&g, v("0.3"), &mut rng);
            assert!(sup <= v("0.3"));
            assert!(shared_structure_bound(&g, &h).is_some());
        }
    }

    #[test]
    fn branch_attachment() {
        let s = segment(v("0"), v("2"));
        let b = attach_branch(&s, 0, v("0.5"), false);
        h_check(&b);
        assert_eq!(b.canonicalize().unwrap().critical_values().values(), &[v("0"), v("0.5"), v("1"), v("2")]);
    }

    fn h_check(g: &ReebGraph) {
        g.check(true).unwrap();
    }

    #[test]
    fn small_runs_are_deterministic_and_pass() {
        let c = ExperimentConfig { trials: Some(5), ..Default::default() };
        for e in Experiment::ALL {
            let a = run(e, &c).unwrap();
            assert!(a.all_passed(), "{}", a.to_text());
            assert_eq!(a, run(e, &c).unwrap());
        }
    }
}
