//! Plain-text graph formats.
//!
//! The edge list has one arc per line, `src dst weight`, where the weight is
//! a decimal or a `p/q` fraction. A line with a single token declares a
//! vertex, which is how isolated vertices are written. `#` starts a comment
//! and blank lines are skipped. Vertices are numbered in order of first
//! appearance.
//!
//! The matrix format holds transition exponents: a header line of vertex
//! names followed by one row per vertex, `name v_1 .. v_N`, with `-` or
//! `inf` for a missing transition. The diagonal is ignored.

use crate::error::{Error, Result};
use crate::graph::{ArcInsert, Digraph, DigraphBuilder};
use crate::weight::{format_rational, parse_rational, Rational};

/// A parsed graph together with non-fatal remarks about the input.
#[derive(Clone, Debug)]
pub struct ParsedGraph {
    pub graph: Digraph,
    pub warnings: Vec<String>,
}

/// Non-comment tokens of a line, each with its 1-based column.
fn tokens(line: &str) -> Vec<(usize, &str)> {
    let body = line.split('#').next().unwrap_or("");
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in body.char_indices() {
        match (c.is_whitespace(), start) {
            (false, None) => start = Some(i),
            (true, Some(s)) => {
                out.push((s, &body[s..i]));
                start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push((s, &body[s..]));
    }
    out.into_iter()
        .map(|(byte, tok)| (body[..byte].chars().count() + 1, tok))
        .collect()
}

fn parse_error(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        column,
        message: message.into(),
    }
}

pub fn parse_edge_list(text: &str) -> Result<ParsedGraph> {
    let mut b = DigraphBuilder::new();
    let mut warnings = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let lineno = idx + 1;
        match tokens(line).as_slice() {
            [] => {}
            [(_, v)] => {
                b.add_vertex(v);
            }
            [(_, src), (_, dst), (wcol, w)] => {
                let weight = parse_rational(w).map_err(|e| parse_error(lineno, *wcol, e.to_string()))?;
                match b.add_arc(src, dst, weight) {
                    Ok(ArcInsert::New) => {}
                    Ok(ArcInsert::Duplicate { kept }) => warnings.push(format!(
                        "line {lineno}: duplicate arc {src} -> {dst}, keeping weight {}",
                        format_rational(&kept)
                    )),
                    Err(e) => return Err(parse_error(lineno, 1, e.to_string())),
                }
            }
            [_, _] => {
                return Err(parse_error(lineno, line.len() + 1, "expected `src dst weight`, the weight is missing"))
            }
            [_, _, _, (col, extra), ..] => {
                return Err(parse_error(lineno, *col, format!("unexpected token `{extra}` after the weight")))
            }
        }
    }
    let graph = b.build().map_err(|e| match e {
        Error::EmptyGraph => parse_error(text.lines().count().max(1), 1, "no vertices declared"),
        other => other,
    })?;
    Ok(ParsedGraph { graph, warnings })
}

/// Canonical edge list: every vertex declared in index order, then the arcs
/// in index order.
pub fn format_edge_list(graph: &Digraph) -> String {
    let mut out = String::new();
    for name in graph.names() {
        out.push_str(name);
        out.push('\n');
    }
    for (i, j, w) in graph.arcs() {
        out.push_str(&format!("{} {} {}\n", graph.name(i), graph.name(j), format_rational(&w)));
    }
    out
}

fn parse_entry(tok: &str) -> std::result::Result<Option<Rational>, String> {
    match tok {
        "-" | "inf" | "." => Ok(None),
        t => parse_rational(t).map(Some).map_err(|e| e.to_string()),
    }
}

pub fn parse_quasi_potentials(text: &str) -> Result<ParsedGraph> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, tokens(l)))
        .filter(|(_, t)| !t.is_empty());
    let (_, header) = lines.next().ok_or_else(|| parse_error(1, 1, "missing header of vertex names"))?;
    let names: Vec<&str> = header.iter().map(|&(_, t)| t).collect();
    let mut rows = vec![None; names.len()];
    for (lineno, toks) in lines {
        let (col, name) = toks[0];
        let i = names
            .iter()
            .position(|&n| n == name)
            .ok_or_else(|| parse_error(lineno, col, format!("row for undeclared vertex `{name}`")))?;
        if rows[i].is_some() {
            return Err(parse_error(lineno, col, format!("second row for `{name}`")));
        }
        if toks.len() != names.len() + 1 {
            return Err(parse_error(
                lineno,
                toks.last().map_or(1, |t| t.0),
                format!("expected {} entries, found {}", names.len(), toks.len() - 1),
            ));
        }
        let row = toks[1..]
            .iter()
            .map(|&(c, t)| parse_entry(t).map_err(|m| parse_error(lineno, c, m)))
            .collect::<Result<Vec<_>>>()?;
        rows[i] = Some(row);
    }
    let matrix: Vec<Vec<Option<Rational>>> = rows
        .into_iter()
        .enumerate()
        .map(|(i, r)| r.ok_or_else(|| parse_error(text.lines().count(), 1, format!("no row for `{}`", names[i]))))
        .collect::<Result<_>>()?;
    Ok(ParsedGraph {
        graph: Digraph::from_quasi_potentials(&names, &matrix)?,
        warnings: Vec::new(),
    })
}

/// Reads either format; a file whose first meaningful line starts with the
/// `#!matrix` marker or has a `.qp` extension is read as a matrix.
pub fn read_graph(path: &std::path::Path) -> Result<ParsedGraph> {
    let text = std::fs::read_to_string(path)?;
    let matrix = path.extension().is_some_and(|e| e == "qp") || text.trim_start().starts_with("#!matrix");
    if matrix {
        parse_quasi_potentials(&text)
    } else {
        parse_edge_list(&text)
    }
}
