//! Text formats: the `n m` edge list, per-vertex color lists, and DOT
//! export with a matching importer for the subset this crate emits.
//! All functions are pure string transforms; file handling stays with the
//! caller.

use std::fmt::Write as _;

use thiserror::Error;

use crate::consistency::ColorLists;
use crate::digraph::{Digraph, DigraphError, VertexId};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FormatError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("line {line}: vertex {v} out of range (graph has {n} vertices)")]
    VertexOutOfRange { line: usize, v: usize, n: usize },
    #[error("line {line}: duplicate arc {u} -> {v}")]
    DuplicateArc { line: usize, u: usize, v: usize },
    #[error("header promises {expected} arcs, found {got}")]
    ArcCountMismatch { expected: usize, got: usize },
    #[error("line {line}: vertex {v} listed twice")]
    DuplicateListVertex { line: usize, v: usize },
    #[error("line {line}: color {c} outside the {palette}-color palette")]
    ColorOutOfRange { line: usize, c: usize, palette: usize },
    #[error("missing `n m` header line")]
    MissingHeader,
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

/// Edge list: header `n m`, then m lines `u v`. `#` comments and blank
/// lines are skipped anywhere.
pub fn parse_edge_list(text: &str) -> Result<Digraph, FormatError> {
    let mut lines = content_lines(text);
    let (header_line, header) = lines.next().ok_or(FormatError::MissingHeader)?;
    let mut parts = header.split_whitespace();
    let (n, m) = match (parts.next(), parts.next(), parts.next()) {
        (Some(n), Some(m), None) => {
            let n = n.parse::<usize>().map_err(|_| FormatError::Syntax {
                line: header_line,
                msg: format!("bad vertex count {n:?}"),
            })?;
            let m = m.parse::<usize>().map_err(|_| FormatError::Syntax {
                line: header_line,
                msg: format!("bad arc count {m:?}"),
            })?;
            (n, m)
        }
        _ => {
            return Err(FormatError::Syntax {
                line: header_line,
                msg: format!("expected `n m`, found {header:?}"),
            })
        }
    };
    let mut arcs: Vec<(VertexId, VertexId)> = Vec::with_capacity(m);
    let mut arc_lines: Vec<usize> = Vec::with_capacity(m);
    for (line, body) in lines {
        let mut parts = body.split_whitespace();
        let (u, v) = match (parts.next(), parts.next(), parts.next()) {
            (Some(u), Some(v), None) => {
                let parse = |s: &str| {
                    s.parse::<usize>().map_err(|_| FormatError::Syntax {
                        line,
                        msg: format!("bad vertex id {s:?}"),
                    })
                };
                (parse(u)?, parse(v)?)
            }
            _ => {
                return Err(FormatError::Syntax {
                    line,
                    msg: format!("expected `u v`, found {body:?}"),
                })
            }
        };
        arcs.push((u, v));
        arc_lines.push(line);
    }
    if arcs.len() != m {
        return Err(FormatError::ArcCountMismatch { expected: m, got: arcs.len() });
    }
    Digraph::new(n, &arcs).map_err(|e| match e {
        DigraphError::VertexOutOfRange { v, n } => {
            let line = arcs
                .iter()
                .zip(&arc_lines)
                .find(|((a, b), _)| *a == v || *b == v)
                .map(|(_, &l)| l)
                .unwrap_or(header_line);
            FormatError::VertexOutOfRange { line, v, n }
        }
        DigraphError::DuplicateArc { u, v } => {
            let line = arcs
                .iter()
                .zip(&arc_lines)
                .filter(|(&a, _)| a == (u, v))
                .nth(1)
                .map(|(_, &l)| l)
                .unwrap_or(header_line);
            FormatError::DuplicateArc { line, u, v }
        }
    })
}

pub fn format_edge_list(g: &Digraph) -> String {
    let mut out = String::new();
    writeln!(out, "{} {}", g.n(), g.arc_count()).unwrap();
    for &(u, v) in g.arcs() {
        writeln!(out, "{u} {v}").unwrap();
    }
    out
}

/// Color lists: one line `v: c1 c2 ...` per constrained vertex; an absent
/// vertex keeps the full palette, a bare `v:` is the empty list.
pub fn parse_lists(text: &str, n: usize, palette: usize) -> Result<ColorLists, FormatError> {
    let mut lists = ColorLists::full(n, palette);
    let mut seen = vec![false; n];
    for (line, body) in content_lines(text) {
        let (head, tail) = body.split_once(':').ok_or_else(|| FormatError::Syntax {
            line,
            msg: format!("expected `v: colors...`, found {body:?}"),
        })?;
        let v: usize = head.trim().parse().map_err(|_| FormatError::Syntax {
            line,
            msg: format!("bad vertex id {:?}", head.trim()),
        })?;
        if v >= n {
            return Err(FormatError::VertexOutOfRange { line, v, n });
        }
        if seen[v] {
            return Err(FormatError::DuplicateListVertex { line, v });
        }
        seen[v] = true;
        let mut mask = 0u64;
        for token in tail.split_whitespace() {
            let c: usize = token.parse().map_err(|_| FormatError::Syntax {
                line,
                msg: format!("bad color {token:?}"),
            })?;
            if c >= palette {
                return Err(FormatError::ColorOutOfRange { line, c, palette });
            }
            mask |= 1 << c;
        }
        lists.set_mask(v, mask);
    }
    Ok(lists)
}

pub fn format_lists(lists: &ColorLists) -> String {
    let mut out = String::new();
    for v in 0..lists.n() {
        let colors: Vec<String> = lists.colors(v).map(|c| c.to_string()).collect();
        if colors.is_empty() {
            writeln!(out, "{v}:").unwrap();
        } else {
            writeln!(out, "{v}: {}", colors.join(" ")).unwrap();
        }
    }
    out
}

fn escape_label(label: &str) -> String {
    label.replace('\\', "\\\\").replace('"', "\\\"")
}

fn unescape_label(label: &str) -> String {
    let mut out = String::new();
    let mut chars = label.chars();
    while let Some(c) = chars.next() {
        if c == '\\' {
            if let Some(next) = chars.next() {
                out.push(next);
            }
        } else {
            out.push(c);
        }
    }
    out
}

/// DOT serialization; every vertex gets a node line so isolated vertices
/// survive a round trip.
pub fn to_dot(g: &Digraph, labels: Option<&[String]>) -> String {
    let mut out = String::from("digraph G {\n");
    for v in 0..g.n() {
        match labels.and_then(|ls| ls.get(v)) {
            Some(label) if !label.is_empty() => {
                writeln!(out, "  {v} [label=\"{}\"];", escape_label(label)).unwrap()
            }
            _ => writeln!(out, "  {v};").unwrap(),
        }
    }
    for &(u, v) in g.arcs() {
        writeln!(out, "  {u} -> {v};").unwrap();
    }
    out.push_str("}\n");
    out
}

/// Reads the DOT subset `to_dot` writes: numeric node ids, optional label
/// attributes, one statement per line.
pub fn parse_dot(text: &str) -> Result<(Digraph, Vec<String>), FormatError> {
    let mut arcs: Vec<(VertexId, VertexId)> = Vec::new();
    let mut labels: Vec<(VertexId, String)> = Vec::new();
    let mut max_vertex: Option<usize> = None;
    let mut seen_open = false;
    let mut seen_close = false;
    let bump = |max_vertex: &mut Option<usize>, v: usize| {
        *max_vertex = Some(max_vertex.map_or(v, |m| m.max(v)));
    };
    for (line, body) in content_lines(text) {
        if seen_close {
            return Err(FormatError::Syntax { line, msg: "statement after closing brace".into() });
        }
        if !seen_open {
            if body.starts_with("digraph") && body.ends_with('{') {
                seen_open = true;
                continue;
            }
            return Err(FormatError::Syntax {
                line,
                msg: format!("expected `digraph <name> {{`, found {body:?}"),
            });
        }
        if body == "}" {
            seen_close = true;
            continue;
        }
        let stmt = body.strip_suffix(';').unwrap_or(body).trim();
        if let Some((u, v)) = stmt.split_once("->") {
            let parse = |s: &str| {
                s.trim().parse::<usize>().map_err(|_| FormatError::Syntax {
                    line,
                    msg: format!("bad vertex id {:?}", s.trim()),
                })
            };
            let (u, v) = (parse(u)?, parse(v)?);
            bump(&mut max_vertex, u);
            bump(&mut max_vertex, v);
            arcs.push((u, v));
        } else if let Some((id, attr)) = stmt.split_once('[') {
            let v: usize = id.trim().parse().map_err(|_| FormatError::Syntax {
                line,
                msg: format!("bad vertex id {:?}", id.trim()),
            })?;
            let attr = attr.strip_suffix(']').ok_or_else(|| FormatError::Syntax {
                line,
                msg: "unterminated attribute list".into(),
            })?;
            let label = attr
                .trim()
                .strip_prefix("label=\"")
                .and_then(|rest| rest.strip_suffix('"'))
                .ok_or_else(|| FormatError::Syntax {
                    line,
                    msg: format!("expected label=\"...\", found {attr:?}"),
                })?;
            bump(&mut max_vertex, v);
            labels.push((v, unescape_label(label)));
        } else {
            let v: usize = stmt.parse().map_err(|_| FormatError::Syntax {
                line,
                msg: format!("unrecognized statement {stmt:?}"),
            })?;
            bump(&mut max_vertex, v);
        }
    }
    if !seen_open || !seen_close {
        return Err(FormatError::Syntax { line: 0, msg: "missing digraph braces".into() });
    }
    let n = max_vertex.map_or(0, |m| m + 1);
    let mut label_vec = vec![String::new(); n];
    for (v, label) in labels {
        label_vec[v] = label;
    }
    let g = Digraph::new(n, &arcs).map_err(|e| match e {
        DigraphError::DuplicateArc { u, v } => FormatError::DuplicateArc { line: 0, u, v },
        DigraphError::VertexOutOfRange { v, n } => FormatError::VertexOutOfRange { line: 0, v, n },
    })?;
    Ok((g, label_vec))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn edge_list_round_trip() {
        let g = Digraph::new(4, &[(0, 1), (1, 2), (2, 0), (3, 3)]).unwrap();
        assert_eq!(parse_edge_list(&format_edge_list(&g)), Ok(g));
    }

    #[test]
    fn edge_list_accepts_comments_and_blanks() {
        let text = "# a digon\n\n2 2\n0 1\n# middle\n1 0\n";
        let g = parse_edge_list(text).unwrap();
        assert_eq!(g.arcs(), &[(0, 1), (1, 0)]);
    }

    #[test]
    fn edge_list_errors() {
        assert_eq!(parse_edge_list(""), Err(FormatError::MissingHeader));
        assert_eq!(
            parse_edge_list("2 1\n0 2\n"),
            Err(FormatError::VertexOutOfRange { line: 2, v: 2, n: 2 })
        );
        assert_eq!(
            parse_edge_list("2 2\n0 1\n0 1\n"),
            Err(FormatError::DuplicateArc { line: 3, u: 0, v: 1 })
        );
        assert_eq!(
            parse_edge_list("2 2\n0 1\n"),
            Err(FormatError::ArcCountMismatch { expected: 2, got: 1 })
        );
        assert!(matches!(parse_edge_list("2 1\n0 1 9\n"), Err(FormatError::Syntax { line: 2, .. })));
    }

    #[test]
    fn lists_round_trip_and_defaults() {
        let parsed = parse_lists("0: 1 2\n2:\n", 3, 3).unwrap();
        assert_eq!(parsed.mask(0), 0b110);
        assert_eq!(parsed.mask(1), 0b111);
        assert_eq!(parsed.mask(2), 0);
        let again = parse_lists(&format_lists(&parsed), 3, 3).unwrap();
        assert_eq!(parsed, again);
    }

    #[test]
    fn lists_errors() {
        assert_eq!(
            parse_lists("0: 1\n0: 2\n", 2, 3),
            Err(FormatError::DuplicateListVertex { line: 2, v: 0 })
        );
        assert_eq!(
            parse_lists("5: 1\n", 2, 3),
            Err(FormatError::VertexOutOfRange { line: 1, v: 5, n: 2 })
        );
        assert_eq!(
            parse_lists("0: 7\n", 2, 3),
            Err(FormatError::ColorOutOfRange { line: 1, c: 7, palette: 3 })
        );
        assert!(matches!(parse_lists("0 1 2\n", 2, 3), Err(FormatError::Syntax { line: 1, .. })));
    }

    #[test]
    fn dot_round_trip_with_labels() {
        let g = Digraph::new(3, &[(0, 1), (1, 2)]).unwrap();
        let labels = vec!["x".to_string(), "said \"hi\"".to_string(), String::new()];
        let dot = to_dot(&g, Some(&labels));
        let (back, back_labels) = parse_dot(&dot).unwrap();
        assert_eq!(back, g);
        assert_eq!(back_labels, labels);
    }

    #[test]
    fn dot_preserves_isolated_vertices() {
        let g = Digraph::new(3, &[(0, 1)]).unwrap();
        let (back, _) = parse_dot(&to_dot(&g, None)).unwrap();
        assert_eq!(back, g);
    }

    #[test]
    fn dot_rejects_junk() {
        assert!(parse_dot("graph G {\n}\n").is_err());
        assert!(parse_dot("digraph G {\n  0 -> x;\n}\n").is_err());
        assert!(parse_dot("digraph G {\n").is_err());
    }
}
