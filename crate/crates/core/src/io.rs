//! File formats: graph text, graph JSON, path manifests.
//!
//! Graph text is line oriented:
//!
//! ```text
//! # name: Y
//! v 0 0
//! v 1 1
//! e 0 1
//! ```
//!
//! Blank lines and `#` comments are ignored, except a leading `# name:` line
//! which names the graph. Printing emits vertices in storage order, then
//! edges with the lower endpoint first, so canonical files round-trip byte
//! for byte.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::distortion::{fd_bound, WitnessChoice};
use crate::error::{Error, Result};
use crate::graph::ReebGraph;
use crate::paths::{GraphPath, PathStep};
use crate::value::Value;

const NAME_PREFIX: &str = "# name:";

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

pub fn parse_graph(text: &str) -> Result<ReebGraph> {
    let mut name = None;
    let mut vertices: Vec<(u64, Value)> = Vec::new();
    let mut vertex_lines: Vec<usize> = Vec::new();
    let mut edges: Vec<(u64, u64)> = Vec::new();
    let mut edge_lines: Vec<usize> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let t = raw.trim();
        if let Some(rest) = t.strip_prefix(NAME_PREFIX) {
            name = Some(rest.trim().to_string());
            continue;
        }
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = t.split_whitespace().collect();
        let id = |s: &str| s.parse::<u64>().map_err(|_| parse_err(line, format!("bad vertex id {s:?}")));
        match fields.as_slice() {
            ["v", a, x] => {
                let value: Value = x.parse().map_err(|e: Error| parse_err(line, e.to_string()))?;
                vertices.push((id(a)?, value));
                vertex_lines.push(line);
            }
            ["e", a, b] => {
                edges.push((id(a)?, id(b)?));
                edge_lines.push(line);
            }
            _ => return Err(parse_err(line, format!("expected `v <id> <value>` or `e <id> <id>`, got {t:?}"))),
        }
    }
    let mut seen = std::collections::BTreeSet::new();
    for ((id, _), &line) in vertices.iter().zip(&vertex_lines) {
        if !seen.insert(*id) {
            return Err(parse_err(line, format!("duplicate vertex id {id}")));
        }
    }
    for (&(a, b), &line) in edges.iter().zip(&edge_lines) {
        for end in [a, b] {
            if !seen.contains(&end) {
                return Err(parse_err(line, format!("edge refers to unknown vertex {end}")));
            }
        }
    }
    let g = ReebGraph::new(vertices, edges)?;
    Ok(match name {
        Some(n) => g.with_name(n),
        None => g,
    })
}

pub fn print_graph(g: &ReebGraph) -> String {
    let mut out = String::new();
    if let Some(n) = g.name() {
        writeln!(out, "{NAME_PREFIX} {n}").unwrap();
    }
    for v in g.vertices() {
        writeln!(out, "v {} {}", v.id, v.value).unwrap();
    }
    let vs = g.vertices();
    for &(a, b) in g.edges() {
        writeln!(out, "e {} {}", vs[a].id, vs[b].id).unwrap();
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub vertices: Vec<VertexJson>,
    pub edges: Vec<[u64; 2]>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexJson {
    pub id: u64,
    pub value: Value,
}

impl From<&ReebGraph> for GraphJson {
    fn from(g: &ReebGraph) -> GraphJson {
        let vs = g.vertices();
        GraphJson {
            name: g.name().map(str::to_string),
            vertices: vs.iter().map(|v| VertexJson { id: v.id, value: v.value }).collect(),
            edges: g.edges().iter().map(|&(a, b)| [vs[a].id, vs[b].id]).collect(),
        }
    }
}

impl TryFrom<GraphJson> for ReebGraph {
    type Error = Error;

    fn try_from(j: GraphJson) -> Result<ReebGraph> {
        let g = ReebGraph::new(
            j.vertices.into_iter().map(|v| (v.id, v.value)).collect(),
            j.edges.into_iter().map(|[a, b]| (a, b)).collect(),
        )?;
        Ok(match j.name {
            Some(n) => g.with_name(n),
            None => g,
        })
    }
}

pub fn graph_to_json(g: &ReebGraph) -> String {
    serde_json::to_string_pretty(&GraphJson::from(g)).expect("graph serializes")
}

pub fn graph_from_json(text: &str) -> Result<ReebGraph> {
    serde_json::from_str::<GraphJson>(text)?.try_into()
}

/// Either format, chosen by content: JSON starts with `{`.
pub fn parse_graph_any(text: &str) -> Result<ReebGraph> {
    if text.trim_start().starts_with('{') {
        graph_from_json(text)
    } else {
        parse_graph(text)
    }
}

pub fn read_graph(path: &Path) -> Result<ReebGraph> {
    let text = fs::read_to_string(path)?;
    parse_graph_any(&text)
}

/// One manifest entry: a time stamp and a graph file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ManifestEntry {
    pub t: Value,
    pub file: PathBuf,
}

/// Lines of `<t> <graph-file>`, times strictly increasing. Relative files
/// are resolved against `base`.
pub fn parse_manifest(text: &str, base: &Path) -> Result<Vec<ManifestEntry>> {
    let mut out: Vec<ManifestEntry> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let t = raw.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        let (ts, file) = t
            .split_once(char::is_whitespace)
            .ok_or_else(|| parse_err(line, "expected `<t> <graph-file>`"))?;
        let time: Value = ts.parse().map_err(|e: Error| parse_err(line, e.to_string()))?;
        if let Some(prev) = out.last() {
            if time <= prev.t {
                return Err(parse_err(line, format!("time {time} does not increase")));
            }
        }
        let file = PathBuf::from(file.trim());
        let file = if file.is_relative() { base.join(file) } else { file };
        out.push(ManifestEntry { t: time, file });
    }
    if out.is_empty() {
        return Err(Error::EmptyPath);
    }
    Ok(out)
}

/// Loads the graphs of a manifest into a path with times rescaled to
/// `[0, 1]`; each step's certificate comes from `fd_bound`.
pub fn load_path(manifest: &Path) -> Result<GraphPath> {
    let text = fs::read_to_string(manifest)?;
    let base = manifest.parent().unwrap_or(Path::new("."));
    let entries = parse_manifest(&text, base)?;
    let graphs = entries.iter().map(|e| read_graph(&e.file)).collect::<Result<Vec<_>>>()?;
    path_from_entries(&entries, graphs)
}

pub fn path_from_entries(entries: &[ManifestEntry], graphs: Vec<ReebGraph>) -> Result<GraphPath> {
    for g in &graphs {
        g.check(true)?;
    }
    let certificates = graphs
        .windows(2)
        .map(|w| Ok(fd_bound(&w[0], &w[1], &WitnessChoice::Natural)?.upper))
        .collect::<Result<Vec<_>>>()?;
    let (t0, t1) = (entries[0].t, entries[entries.len() - 1].t);
    let span = if t1 > t0 { t1 - t0 } else { Value::ONE };
    let steps = entries
        .iter()
        .zip(graphs)
        .map(|(e, graph)| PathStep { t: (e.t - t0) / span, graph })
        .collect();
    let p = GraphPath { steps, certificates };
    p.validate()?;
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::{figure1_left, y_graph};
    use crate::value::v;

    #[test]
    fn text_round_trip() {
        let text = "# name: Y\nv 0 0\nv 1 1\nv 2 2\nv 3 3\ne 0 2\ne 1 2\ne 2 3\n";
        let g = parse_graph(text).unwrap();
        assert_eq!(print_graph(&g), text);
        assert_eq!(g.name(), Some("Y"));
        let g = figure1_left();
        assert_eq!(parse_graph(&print_graph(&g)).unwrap(), g);
    }

    #[test]
    fn comments_and_fractions() {
        let g = parse_graph("# a comment\n\nv 7 1/3\nv 9 -0.25  # trailing? no\n").unwrap_err();
        assert!(matches!(g, Error::Parse { line: 4, .. }));
        let g = parse_graph("v 7 1/3\n  v 9 -0.25\ne 7 9\n").unwrap();
        assert_eq!(g.value(0), Value::new(1, 3));
        assert_eq!(print_graph(&g), "v 7 1/3\nv 9 -0.25\ne 9 7\n");
    }

    #[test]
    fn parse_errors_carry_lines() {
        for (text, line) in [
            ("v 0 0\nv 0 1\n", 2),
            ("v 0 0\ne 0 4\n", 2),
            ("v 0 x\n", 1),
            ("# ok\nq 1 2\n", 2),
            ("v -1 0\n", 1),
        ] {
            match parse_graph(text) {
                Err(Error::Parse { line: l, .. }) => assert_eq!(l, line, "{text:?}"),
                other => panic!("{text:?}: {other:?}"),
            }
        }
    }

    #[test]
    fn json_round_trip() {
        let g = y_graph().with_name("Y");
        let j = graph_to_json(&g);
        assert_eq!(graph_from_json(&j).unwrap(), g);
        assert_eq!(parse_graph_any(&j).unwrap(), g);
        let k = graph_from_json(r#"{"vertices":[{"id":1,"value":2},{"id":2,"value":"2.5"}],"edges":[[1,2]]}"#).unwrap();
        assert_eq!(k.value(1), v("2.5"));
    }

    #[test]
    fn manifest_parsing() {
        let m = parse_manifest("# path\n0 a.txt\n0.5 b.txt\n2 /abs/c.txt\n", Path::new("/base")).unwrap();
        assert_eq!(m[1].file, PathBuf::from("/base/b.txt"));
        assert_eq!(m[2].file, PathBuf::from("/abs/c.txt"));
        assert!(matches!(parse_manifest("1 a\n1 b\n", Path::new(".")), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(parse_manifest("# nothing\n", Path::new(".")), Err(Error::EmptyPath)));
    }
}
