//! Edge-list text format and DOT export.
//!
//! ```text
//! # comment
//! root r
//! r a
//! a b
//! z        # a single id declares an isolated vertex
//! ```
//!
//! The first non-comment line is `root <id>`, every following line is
//! `<tail> <head>`. Ids match `[A-Za-z0-9_.-]+`. A line holding a single id
//! declares a vertex without edges; the serializer emits such lines only for
//! isolated vertices, so graphs without isolated vertices serialize to plain
//! `<tail> <head>` lines.

use std::collections::HashSet;
use std::fmt::Write as _;

use crate::digraph::{EdgeList, RootedDigraph};
use crate::error::{FlameError, Result};

pub fn is_valid_id(s: &str) -> bool {
    !s.is_empty()
        && s.bytes()
            .all(|b| b.is_ascii_alphanumeric() || matches!(b, b'_' | b'.' | b'-'))
}

fn parse_err(line: usize, message: impl Into<String>) -> FlameError {
    FlameError::Parse {
        line,
        message: message.into(),
    }
}

/// Parses the edge-list format into an unvalidated [`EdgeList`]. Parallel
/// edges are rejected here; loops and root in-edges are left for
/// [`EdgeList::validate`].
pub fn parse_edge_list(text: &str) -> Result<EdgeList> {
    let mut list: Option<EdgeList> = None;
    let mut declared = HashSet::new();
    let mut seen_edges = HashSet::new();

    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let toks: Vec<&str> = body.split_whitespace().collect();
        if let Some(bad) = toks.iter().find(|t| !is_valid_id(t)) {
            return Err(parse_err(line_no, format!("invalid id {bad:?}")));
        }
        let Some(list) = list.as_mut() else {
            match toks.as_slice() {
                ["root", id] => {
                    declared.insert(id.to_string());
                    list = Some(EdgeList {
                        root: id.to_string(),
                        vertices: vec![id.to_string()],
                        edges: Vec::new(),
                    });
                    continue;
                }
                _ => return Err(parse_err(line_no, "expected `root <id>`")),
            }
        };
        let mut declare = |id: &str, list: &mut EdgeList| {
            if declared.insert(id.to_string()) {
                list.vertices.push(id.to_string());
            }
        };
        match toks.as_slice() {
            [id] => declare(id, list),
            [t, h] => {
                if !seen_edges.insert((t.to_string(), h.to_string())) {
                    return Err(parse_err(line_no, format!("parallel edge {t} {h}")));
                }
                declare(t, list);
                declare(h, list);
                list.edges.push((t.to_string(), h.to_string()));
            }
            _ => {
                return Err(parse_err(
                    line_no,
                    format!("expected `<tail> <head>`, got {} tokens", toks.len()),
                ))
            }
        }
    }
    list.ok_or_else(|| parse_err(1, "missing `root <id>` line"))
}

/// Parses and validates in one step.
pub fn parse_digraph(text: &str) -> Result<RootedDigraph> {
    parse_edge_list(text)?.into_digraph()
}

/// Serializes by id, so the text does not depend on internal indices: root
/// line, edges sorted by `(tail, head)` id, then isolated non-root vertices.
pub fn to_edge_list_text(d: &RootedDigraph) -> String {
    let mut s = format!("root {}\n", d.name(d.root()));
    let mut edges: Vec<(&str, &str)> = d.edges().map(|(t, h)| (d.name(t), d.name(h))).collect();
    edges.sort_unstable();
    for (t, h) in edges {
        let _ = writeln!(s, "{t} {h}");
    }
    let mut lonely: Vec<&str> = d
        .non_root_vertices()
        .filter(|&v| d.in_degree(v) == 0 && d.out_neighbors(v).next().is_none())
        .map(|v| d.name(v))
        .collect();
    lonely.sort_unstable();
    for v in lonely {
        let _ = writeln!(s, "{v}");
    }
    s
}

/// DOT export; the root is drawn double-circled.
pub fn to_dot(d: &RootedDigraph) -> String {
    let mut s = String::from("digraph D {\n");
    let _ = writeln!(s, "  \"{}\" [shape=doublecircle];", d.name(d.root()));
    for v in d.non_root_vertices() {
        let _ = writeln!(s, "  \"{}\";", d.name(v));
    }
    for (t, h) in d.edges() {
        let _ = writeln!(s, "  \"{}\" -> \"{}\";", d.name(t), d.name(h));
    }
    s.push_str("}\n");
    s
}
