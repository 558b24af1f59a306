use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use reeb_core::bottleneck::{bottleneck, graph_bottleneck};
use reeb_core::distortion::{fd_bound, Correspondence, WitnessChoice};
use reeb_core::generate::{generate, random_graph, GeneratorSpec, RandomSpec};
use reeb_core::harness::{run, stats, Experiment, ExperimentConfig};
use reeb_core::io::{graph_to_json, load_path, print_graph, read_graph};
use reeb_core::iso::level_isomorphism;
use reeb_core::operators::{full_transform, merge_certified, simplify, MergeParams, TransformParams, Transformed};
use reeb_core::paths::{intrinsic_upper, path_length, Metric};
use reeb_core::persistence::{extended_diagram, ord0_unionfind, Diagram};
use reeb_core::{CriticalValues, Error, ReebGraph, Result, Value};

#[derive(Parser)]
#[command(name = "reeb", version, about = "Reeb graphs, extended persistence and distances between them")]
struct Cli {
    /// output style
    #[arg(long, global = true, value_enum, default_value = "text")]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    /// one JSON object per line
    Records,
}

#[derive(Clone, Copy, ValueEnum)]
enum WitnessArg {
    Natural,
    Collapse,
    File,
}

#[derive(Clone, Copy, ValueEnum)]
enum MetricArg {
    Db,
    Fd,
}

#[derive(Clone, Copy, ValueEnum)]
enum GraphFormat {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Extended persistence diagram of a graph
    Diagram {
        graph: PathBuf,
        /// also cross-check the degree-0 part with union-find
        #[arg(long)]
        check: bool,
    },
    /// Bottleneck distance between two graphs (or two diagram files)
    Bottleneck {
        a: PathBuf,
        b: PathBuf,
        /// read inputs as diagram files
        #[arg(long)]
        diagrams: bool,
        /// fail unless the distance equals this value
        #[arg(long)]
        expect: Option<Value>,
    },
    /// Contract the components of the preimage of [a, b]
    Merge {
        graph: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        a: Value,
        #[arg(long, allow_hyphen_values = true)]
        b: Value,
    },
    /// Remove every feature within alpha/2 of the diagonal
    Simplify {
        graph: PathBuf,
        #[arg(long)]
        alpha: Value,
    },
    /// Simplify at 2 alpha, then merge 9 alpha bands around anchor values
    Transform {
        graph: PathBuf,
        #[arg(long)]
        alpha: Value,
        /// graph whose critical values anchor the bands (default: the input)
        #[arg(long)]
        anchors: Option<PathBuf>,
    },
    /// Level-preserving isomorphism test
    Iso {
        a: PathBuf,
        b: PathBuf,
        /// fail unless the answer matches
        #[arg(long)]
        expect: Option<bool>,
    },
    /// Certified bounds on the functional distortion distance
    Fdbound {
        a: PathBuf,
        b: PathBuf,
        #[arg(long, value_enum, default_value = "natural")]
        witness: WitnessArg,
        /// correspondence JSON, used with `--witness file`
        #[arg(long)]
        correspondence: Option<PathBuf>,
    },
    /// Length of a path given by a manifest of `<t> <graph-file>` lines
    Pathlen {
        manifest: PathBuf,
        #[arg(long, value_enum, default_value = "db")]
        metric: MetricArg,
    },
    /// Certified upper bound on the intrinsic distance
    Intrinsic { a: PathBuf, b: PathBuf },
    /// Print a built-in or random graph
    Gen {
        /// segment, cycle, Y, Y-perturbed, figure1_left, figure1_right,
        /// figure5:<n>, random:<seed>:<critical>:<lo>:<hi>, or random
        spec: String,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// critical values for plain `random`
        #[arg(long, default_value_t = 5)]
        critical: usize,
        #[arg(long, value_enum, default_value = "text")]
        to: GraphFormat,
    },
    /// Run a named experiment suite, or `all`
    Experiment {
        name: String,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long = "K", default_value = "1/22")]
        k: Value,
        #[arg(long, default_value = "1/2")]
        eps_frac: Value,
    },
    /// Re-emit a graph in either format
    Convert {
        graph: PathBuf,
        #[arg(long, value_enum, default_value = "text")]
        to: GraphFormat,
    },
    /// Sizes and critical values of a graph
    Stats { graph: PathBuf },
}

/// Result of a command: what to print and whether its assertions held.
struct Outcome {
    out: String,
    ok: bool,
}

impl Outcome {
    fn ok(out: String) -> Outcome {
        Outcome { out, ok: true }
    }
}

fn load(path: &Path) -> Result<ReebGraph> {
    let g = read_graph(path)?;
    g.check(true)?;
    Ok(g)
}

fn record(v: serde_json::Value) -> String {
    format!("{v}\n")
}

fn emit_graph(t: &Transformed, format: Format) -> String {
    match format {
        Format::Text => format!("# certificate: {}\n{}", t.certificate, print_graph(&t.graph)),
        Format::Records => record(json!({
            "certificate": t.certificate,
            "graph": serde_json::from_str::<serde_json::Value>(&graph_to_json(&t.graph)).expect("valid json"),
        })),
    }
}

fn diagram_out(d: &Diagram, format: Format) -> String {
    match format {
        Format::Text => d.to_text(),
        Format::Records => d.points().iter().map(|p| record(json!(p))).collect(),
    }
}

fn execute(cli: Cli) -> Result<Outcome> {
    let format = cli.format;
    Ok(match cli.command {
        Command::Diagram { graph, check } => {
            let g = load(&graph)?;
            let d = extended_diagram(&g)?;
            let mut ok = true;
            if check {
                let mut uf = ord0_unionfind(&g, false);
                uf.extend(ord0_unionfind(&g, true));
                let mut mine: Vec<_> = d.of_kind(reeb_core::Kind::Ord0);
                mine.extend(d.of_kind(reeb_core::Kind::Rel1));
                mine.sort();
                uf.sort();
                ok = mine == uf;
                if !ok {
                    eprintln!("union-find disagrees with the reduction");
                }
            }
            Outcome { out: diagram_out(&d, format), ok }
        }
        Command::Bottleneck { a, b, diagrams, expect } => {
            let (d1, d2) = if diagrams {
                (Diagram::parse(&fs::read_to_string(a)?)?, Diagram::parse(&fs::read_to_string(b)?)?)
            } else {
                (extended_diagram(&load(&a)?)?, extended_diagram(&load(&b)?)?)
            };
            let r = bottleneck(&d1, &d2);
            let ok = expect.is_none_or(|e| e == r.value);
            let out = match format {
                Format::Text => format!("{}\n", r.value),
                Format::Records => record(json!({ "bottleneck": r.value, "witness": r.witness, "ok": ok })),
            };
            Outcome { out, ok }
        }
        Command::Merge { graph, a, b } => {
            let t = merge_certified(&load(&graph)?, &MergeParams::new(a, b)?)?;
            Outcome::ok(emit_graph(&t, format))
        }
        Command::Simplify { graph, alpha } => Outcome::ok(emit_graph(&simplify(&load(&graph)?, alpha)?, format)),
        Command::Transform { graph, alpha, anchors } => {
            let g = load(&graph)?;
            let anchors: CriticalValues = match anchors {
                Some(p) => load(&p)?.critical_values(),
                None => g.critical_values(),
            };
            let t = full_transform(&g, &TransformParams::new(alpha, anchors)?)?;
            Outcome::ok(emit_graph(&t, format))
        }
        Command::Iso { a, b, expect } => {
            let (g1, g2) = (load(&a)?, load(&b)?);
            let m = level_isomorphism(&g1, &g2);
            let iso = m.is_some();
            let ok = expect.is_none_or(|e| e == iso);
            let out = match format {
                Format::Text => match &m {
                    Some(map) => {
                        let pairs: Vec<String> = map
                            .iter()
                            .enumerate()
                            .map(|(i, &j)| format!("{}->{}", g1.vertices()[i].id, g2.vertices()[j].id))
                            .collect();
                        format!("true {}\n", pairs.join(" "))
                    }
                    None => "false\n".to_string(),
                },
                Format::Records => {
                    let ids = m.as_ref().map(|map| {
                        map.iter()
                            .enumerate()
                            .map(|(i, &j)| (g1.vertices()[i].id, g2.vertices()[j].id))
                            .collect::<Vec<_>>()
                    });
                    record(json!({ "isomorphic": iso, "map": ids, "ok": ok }))
                }
            };
            Outcome { out, ok }
        }
        Command::Fdbound { a, b, witness, correspondence } => {
            let (g1, g2) = (load(&a)?, load(&b)?);
            let choice = match witness {
                WitnessArg::Natural => WitnessChoice::Natural,
                WitnessArg::Collapse => WitnessChoice::Collapse,
                WitnessArg::File => {
                    let p = correspondence
                        .ok_or_else(|| Error::BadParams("--witness file needs --correspondence".into()))?;
                    let c: Correspondence = serde_json::from_str(&fs::read_to_string(p)?)?;
                    WitnessChoice::Given(c)
                }
            };
            let c = fd_bound(&g1, &g2, &choice)?;
            let db = graph_bottleneck(&g1, &g2)?;
            let ok = c.lower <= c.upper && db <= Value::from_int(2) * c.upper;
            let out = match format {
                Format::Text => format!("{} <= d_FD <= {}  (d_B = {}, witness {:?})\n", c.lower, c.upper, db, c.witness),
                Format::Records => record(json!({ "certificate": c, "bottleneck": db, "ok": ok })),
            };
            Outcome { out, ok }
        }
        Command::Pathlen { manifest, metric } => {
            let p = load_path(&manifest)?;
            let metric = match metric {
                MetricArg::Db => Metric::Bottleneck,
                MetricArg::Fd => Metric::FdUpper,
            };
            let l = path_length(&p, metric)?;
            let out = match format {
                Format::Text => {
                    let mut s = String::new();
                    for (i, (d, w)) in l.per_step.iter().zip(p.steps.windows(2)).enumerate() {
                        s.push_str(&format!("step {i} [{}, {}]: {d}\n", w[0].t, w[1].t));
                    }
                    s.push_str(&format!("total {}\n", l.total));
                    s
                }
                Format::Records => record(json!({ "total": l.total, "per_step": l.per_step })),
            };
            Outcome::ok(out)
        }
        Command::Intrinsic { a, b } => {
            let e = intrinsic_upper(&load(&a)?, &load(&b)?)?;
            let out = match format {
                Format::Text => format!("{} ({})\n", e.upper, e.family),
                Format::Records => record(json!(e)),
            };
            Outcome::ok(out)
        }
        Command::Gen { spec, seed, critical, to } => {
            let g = if spec == "random" {
                random_graph(&RandomSpec::new(seed, critical, Value::ZERO, Value::from_int(10)))
            } else {
                generate(&spec.parse::<GeneratorSpec>()?)
            };
            Outcome::ok(match to {
                GraphFormat::Text => print_graph(&g),
                GraphFormat::Json => graph_to_json(&g) + "\n",
            })
        }
        Command::Experiment { name, seed, trials, k, eps_frac } => {
            let config = ExperimentConfig { seed, trials, k, eps_frac, ..Default::default() };
            let list: Vec<Experiment> = if name == "all" {
                Experiment::ALL.to_vec()
            } else {
                vec![name.parse()?]
            };
            let mut out = String::new();
            let mut ok = true;
            for e in list {
                let r = run(e, &config)?;
                ok &= r.all_passed();
                out.push_str(&match format {
                    Format::Text => r.to_text(),
                    Format::Records => r.to_records(),
                });
            }
            Outcome { out, ok }
        }
        Command::Convert { graph, to } => {
            let g = read_graph(&graph)?;
            Outcome::ok(match to {
                GraphFormat::Text => print_graph(&g),
                GraphFormat::Json => graph_to_json(&g) + "\n",
            })
        }
        Command::Stats { graph } => {
            let s = stats(&load(&graph)?);
            Outcome::ok(match format {
                Format::Text => s.to_text(),
                Format::Records => record(json!(s)),
            })
        }
    })
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match execute(Cli::parse()) {
        Ok(o) => {
            print!("{}", o.out);
            if o.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
