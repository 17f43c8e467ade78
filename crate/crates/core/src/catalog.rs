//! Catalog text format: blank-line-separated records of
//! `name=` / `vertices=` / `edges=` key-value pairs.
//!
//! ```text
//! # four-qubit examples
//! name=H14
//! vertices=4
//! edges={1,2,3},{1,2,4},{1,3,4},{2,3,4}
//!
//! name=free
//! vertices=4
//! edges=
//! ```
//!
//! Keys may also be separated by `;` on one line, so
//! `"vertices=4; edges={1,2,3,4}"` is a valid single record. Whitespace
//! inside braces is ignored and `#` starts a comment.

use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;

/// Parses a single catalog record into a hypergraph.
pub fn parse_hypergraph(text: &str) -> Result<Hypergraph> {
    let records = parse_catalog(text)?;
    match records.len() {
        1 => Ok(records.into_iter().next().unwrap()),
        0 => Err(Error::Parse {
            line: 1,
            msg: "empty record".into(),
        }),
        k => Err(Error::Parse {
            line: 1,
            msg: format!("expected one record, found {k}"),
        }),
    }
}

/// Parses a whole catalog file into hypergraphs, in file order.
pub fn parse_catalog(text: &str) -> Result<Vec<Hypergraph>> {
    let mut records = Vec::new();
    let mut current: Vec<(usize, String)> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = strip_comment(raw);
        if line.trim().is_empty() {
            if !current.is_empty() {
                records.push(build_record(&current)?);
                current.clear();
            }
            continue;
        }
        for part in line.split(';') {
            if !part.trim().is_empty() {
                current.push((line_no, part.trim().to_string()));
            }
        }
    }
    if !current.is_empty() {
        records.push(build_record(&current)?);
    }
    Ok(records)
}

fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(pos) => &line[..pos],
        None => line,
    }
}

fn build_record(pairs: &[(usize, String)]) -> Result<Hypergraph> {
    let mut name: Option<String> = None;
    let mut vertices: Option<(usize, usize)> = None;
    let mut edges: Option<(usize, String)> = None;
    for (line, pair) in pairs {
        let (key, value) = pair.split_once('=').ok_or_else(|| Error::Parse {
            line: *line,
            msg: format!("expected key=value, got \"{pair}\""),
        })?;
        match key.trim() {
            "name" => name = Some(value.trim().to_string()),
            "vertices" => {
                let n = value.trim().parse::<usize>().map_err(|_| Error::Parse {
                    line: *line,
                    msg: format!("invalid vertex count \"{}\"", value.trim()),
                })?;
                vertices = Some((*line, n));
            }
            "edges" => edges = Some((*line, value.to_string())),
            other => {
                return Err(Error::Parse {
                    line: *line,
                    msg: format!("unknown key \"{other}\""),
                });
            }
        }
    }
    let (vline, n) = vertices.ok_or_else(|| Error::Parse {
        line: pairs.first().map(|(l, _)| *l).unwrap_or(1),
        msg: "missing vertices=".into(),
    })?;
    if n == 0 {
        return Err(Error::Parse {
            line: vline,
            msg: "vertex count must be >= 1".into(),
        });
    }
    let (eline, edge_text) = edges.ok_or_else(|| Error::Parse {
        line: vline,
        msg: "missing edges=".into(),
    })?;
    let masks = parse_edges(&edge_text, n, eline)?;
    let mut h = Hypergraph::new(n, masks).map_err(|e| at_line(e, eline))?;
    if let Some(name) = name {
        h = h.with_name(name);
    }
    Ok(h)
}

fn at_line(e: Error, line: usize) -> Error {
    match e {
        Error::DuplicateEdge { edge, .. } => Error::DuplicateEdge { edge, line },
        other => other,
    }
}

fn parse_edges(text: &str, n: usize, line: usize) -> Result<Vec<u32>> {
    let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if compact.is_empty() {
        return Ok(Vec::new());
    }
    let mut masks = Vec::new();
    let mut rest = compact.as_str();
    loop {
        let Some(stripped) = rest.strip_prefix('{') else {
            return Err(Error::Parse {
                line,
                msg: format!("expected '{{' at \"{rest}\""),
            });
        };
        let Some(end) = stripped.find('}') else {
            return Err(Error::Parse {
                line,
                msg: "unterminated edge brace".into(),
            });
        };
        let body = &stripped[..end];
        let mut mask = 0u32;
        for tok in body.split(',') {
            if tok.is_empty() {
                return Err(Error::Parse {
                    line,
                    msg: "empty vertex index in edge".into(),
                });
            }
            let v: usize = tok.parse().map_err(|_| Error::Parse {
                line,
                msg: format!("invalid vertex index \"{tok}\""),
            })?;
            if v == 0 || v > n {
                return Err(Error::VertexOutOfRange { index: v, n });
            }
            mask |= 1 << (v - 1);
        }
        if mask == 0 {
            return Err(Error::Parse {
                line,
                msg: "empty edge".into(),
            });
        }
        if masks.contains(&mask) {
            return Err(Error::DuplicateEdge {
                edge: crate::hypergraph::format_edge(mask),
                line,
            });
        }
        masks.push(mask);
        rest = &stripped[end + 1..];
        if rest.is_empty() {
            break;
        }
        let Some(after_comma) = rest.strip_prefix(',') else {
            return Err(Error::Parse {
                line,
                msg: format!("expected ',' between edges at \"{rest}\""),
            });
        };
        rest = after_comma;
    }
    Ok(masks)
}
