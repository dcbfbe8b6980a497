//! The line-based graph text format.
//!
//! `v <id> <self_int> <degree> <sep|insep>` declares a vertex,
//! `e <id> <id> <mult>` an edge; `#` starts a comment and tokens are
//! whitespace-separated. Record order does not matter: edges may
//! reference vertices declared later in the file.

use std::collections::BTreeSet;

use fsing_core::{DualGraph, Vertex};

use crate::report::CliError;

fn parse_err(line: usize, msg: impl Into<String>) -> CliError {
    CliError::Parse { line, msg: msg.into() }
}

fn parse_num<T: std::str::FromStr>(line: usize, tok: &str, what: &str) -> Result<T, CliError> {
    tok.parse().map_err(|_| parse_err(line, format!("invalid {}: `{}`", what, tok)))
}

pub fn parse_graph_text(text: &str) -> Result<DualGraph, CliError> {
    let mut vertices: Vec<Vertex> = Vec::new();
    let mut seen: BTreeSet<u32> = BTreeSet::new();
    let mut edges: Vec<(usize, u32, u32, u32)> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = match raw.find('#') {
            Some(k) => &raw[..k],
            None => raw,
        };
        let tokens: Vec<&str> = line.split_whitespace().collect();
        let Some((&kind, rest)) = tokens.split_first() else {
            continue;
        };
        match kind {
            "v" => {
                if rest.len() != 4 {
                    return Err(parse_err(
                        line_no,
                        "vertex record needs `v <id> <self_int> <degree> <sep|insep>`",
                    ));
                }
                let id = parse_num::<u32>(line_no, rest[0], "vertex id")?;
                let self_int = parse_num::<i64>(line_no, rest[1], "self-intersection")?;
                let degree = parse_num::<u32>(line_no, rest[2], "degree")?;
                let separable = match rest[3] {
                    "sep" => true,
                    "insep" => false,
                    other => {
                        return Err(parse_err(
                            line_no,
                            format!("expected `sep` or `insep`, got `{}`", other),
                        ))
                    }
                };
                if !seen.insert(id) {
                    return Err(parse_err(line_no, format!("duplicate vertex id {}", id)));
                }
                vertices.push(Vertex::new(id, self_int, degree, separable));
            }
            "e" => {
                if rest.len() != 3 {
                    return Err(parse_err(line_no, "edge record needs `e <id> <id> <mult>`"));
                }
                let u = parse_num::<u32>(line_no, rest[0], "vertex id")?;
                let v = parse_num::<u32>(line_no, rest[1], "vertex id")?;
                let mult = parse_num::<u32>(line_no, rest[2], "multiplicity")?;
                edges.push((line_no, u, v, mult));
            }
            other => {
                return Err(parse_err(line_no, format!("unknown record type `{}`", other)));
            }
        }
    }
    for &(line_no, u, v, _) in &edges {
        for id in [u, v] {
            if !seen.contains(&id) {
                return Err(parse_err(line_no, format!("edge references missing vertex {}", id)));
            }
        }
    }
    let plain: Vec<(u32, u32, u32)> = edges.iter().map(|&(_, u, v, m)| (u, v, m)).collect();
    DualGraph::new(vertices, plain).map_err(|e| CliError::Invariant(e.to_string()))
}

/// Canonical serialization: vertices sorted by id, then edges with the
/// smaller endpoint first, sorted lexicographically. Parsing the output
/// reproduces the graph exactly.
pub fn serialize_graph(g: &DualGraph) -> String {
    let mut vs: Vec<&Vertex> = g.vertices().iter().collect();
    vs.sort_by_key(|v| v.id);
    let mut out = String::new();
    for v in vs {
        out.push_str(&format!(
            "v {} {} {} {}\n",
            v.id,
            v.self_int,
            v.degree,
            if v.separable { "sep" } else { "insep" }
        ));
    }
    let mut es: Vec<(u32, u32, u32)> = g
        .edges()
        .iter()
        .map(|&(u, v, m)| if u <= v { (u, v, m) } else { (v, u, m) })
        .collect();
    es.sort_unstable();
    for (u, v, m) in es {
        out.push_str(&format!("e {} {} {}\n", u, v, m));
    }
    out
}
