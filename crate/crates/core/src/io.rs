//! Text formats: edge lists for graphs and comma-separated matrices.
//!
//! Edge list: an optional first line `# nodes=N directed={0|1}`, then one
//! `u v [w]` line per edge with 0-based ids and weight 1 by default. Other
//! lines starting with `#` are comments. Without a header the node count is
//! `max id + 1` and the graph is undirected.
//!
//! Matrix CSV: one row per line, comma-separated decimal floats, no header.
//! Values are written in the shortest form that parses back to the same
//! `f64`, so write-then-read is exact.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Largest node count accepted from an edge list (graphs are stored densely).
pub const MAX_NODES: usize = 1 << 15;

fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

struct Header {
    nodes: Option<usize>,
    directed: bool,
}

fn parse_header(line: &str, at: &dyn Fn() -> String) -> Result<Option<Header>> {
    let body = line.trim_start_matches('#').trim();
    let pairs: Vec<&str> = body.split_whitespace().collect();
    if pairs.is_empty() || !pairs.iter().all(|p| p.starts_with("nodes=") || p.starts_with("directed=")) {
        return Ok(None);
    }
    let mut header = Header {
        nodes: None,
        directed: false,
    };
    for p in pairs {
        let (key, value) = p.split_once('=').expect("checked above");
        match key {
            "nodes" => {
                let n: usize = value
                    .parse()
                    .map_err(|_| Error::parse(at(), format!("invalid node count `{value}`")))?;
                if n == 0 || n > MAX_NODES {
                    return Err(Error::parse(at(), format!("node count must be in 1..={MAX_NODES}, got {n}")));
                }
                header.nodes = Some(n);
            }
            _ => {
                header.directed = match value {
                    "0" => false,
                    "1" => true,
                    _ => return Err(Error::parse(at(), format!("directed must be 0 or 1, got `{value}`"))),
                }
            }
        }
    }
    Ok(Some(header))
}

fn parse_id(token: &str, at: &dyn Fn() -> String) -> Result<usize> {
    if token.starts_with('-') {
        return Err(Error::parse(at(), format!("negative node id `{token}`")));
    }
    let id: usize = token
        .parse()
        .map_err(|_| Error::parse(at(), format!("invalid node id `{token}`")))?;
    if id >= MAX_NODES {
        return Err(Error::parse(at(), format!("node id {id} exceeds the limit of {MAX_NODES} nodes")));
    }
    Ok(id)
}

/// Parse edge-list text; `source` names the input in error messages.
pub fn parse_edgelist(text: &str, source: &str) -> Result<Graph> {
    let mut header: Option<Header> = None;
    let mut edges: BTreeMap<(usize, usize), (f64, usize)> = BTreeMap::new();
    let mut seen_content = false;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let at = || format!("{source}:{line_no}");
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if line.starts_with('#') {
            if !seen_content {
                header = parse_header(line, &at)?;
                seen_content = header.is_some();
            }
            continue;
        }
        seen_content = true;
        let tokens: Vec<&str> = line.split_whitespace().collect();
        if tokens.len() < 2 || tokens.len() > 3 {
            return Err(Error::parse(at(), format!("expected `u v [w]`, got `{line}`")));
        }
        let u = parse_id(tokens[0], &at)?;
        let v = parse_id(tokens[1], &at)?;
        if u == v {
            return Err(Error::parse(at(), format!("self-loop on node {u}")));
        }
        let w = match tokens.get(2) {
            None => 1.0,
            Some(t) => {
                let w: f64 = t.parse().map_err(|_| Error::parse(at(), format!("invalid weight `{t}`")))?;
                if !w.is_finite() || w == 0.0 {
                    return Err(Error::parse(at(), format!("weight must be finite and non-zero, got `{t}`")));
                }
                w
            }
        };
        let directed = header.as_ref().is_some_and(|h| h.directed);
        let key = if directed { (u, v) } else { (u.min(v), u.max(v)) };
        if let Some(&(prev, prev_line)) = edges.get(&key) {
            if prev != w {
                return Err(Error::parse(
                    at(),
                    format!("edge {u} {v} repeats line {prev_line} with a different weight"),
                ));
            }
            continue;
        }
        edges.insert(key, (w, line_no));
    }

    let max_id = edges.keys().map(|&(u, v)| u.max(v)).max();
    let (n, directed) = match &header {
        Some(h) => {
            let n = match (h.nodes, max_id) {
                (Some(n), Some(m)) if m >= n => {
                    let line = edges.iter().find(|(k, _)| k.0.max(k.1) == m).map(|(_, v)| v.1).unwrap_or(0);
                    return Err(Error::parse(
                        format!("{source}:{line}"),
                        format!("node id {m} out of range for nodes={n}"),
                    ));
                }
                (Some(n), _) => n,
                (None, Some(m)) => m + 1,
                (None, None) => return Err(Error::parse(source, "edge list defines no nodes")),
            };
            (n, h.directed)
        }
        None => match max_id {
            Some(m) => (m + 1, false),
            None => return Err(Error::parse(source, "edge list defines no nodes")),
        },
    };
    let mut w = DMatrix::zeros(n, n);
    for (&(u, v), &(weight, _)) in &edges {
        w[(u, v)] = weight;
        if !directed {
            w[(v, u)] = weight;
        }
    }
    Graph::new(w, directed)
}

/// Canonical edge-list text: header, then edges in row-major order with
/// `u < v` for undirected graphs and the weight omitted when it is 1.
pub fn format_edgelist(g: &Graph) -> String {
    let mut out = format!("# nodes={} directed={}\n", g.n(), u8::from(g.is_directed()));
    for (u, v, w) in g.edges() {
        if w == 1.0 {
            let _ = writeln!(out, "{u} {v}");
        } else {
            let _ = writeln!(out, "{u} {v} {w}");
        }
    }
    out
}

pub fn read_edgelist(path: impl AsRef<Path>) -> Result<Graph> {
    let path = path.as_ref();
    parse_edgelist(&read_text(path)?, &path.display().to_string())
}

pub fn write_edgelist(g: &Graph, path: impl AsRef<Path>) -> Result<()> {
    write_text(path.as_ref(), &format_edgelist(g))
}

/// Parse comma-separated rows of floats into a matrix.
pub fn parse_matrix_csv(text: &str, source: &str) -> Result<DMatrix<f64>> {
    let mut lines: Vec<&str> = text.lines().collect();
    while lines.last().is_some_and(|l| l.trim().is_empty()) {
        lines.pop();
    }
    if lines.is_empty() {
        return Err(Error::parse(source, "matrix file is empty"));
    }
    let mut rows: Vec<Vec<f64>> = Vec::with_capacity(lines.len());
    for (r, line) in lines.iter().enumerate() {
        let row: Vec<f64> = line
            .split(',')
            .enumerate()
            .map(|(c, tok)| {
                let tok = tok.trim();
                tok.parse::<f64>().map_err(|_| {
                    Error::parse(
                        format!("{source}:row {}, column {}", r + 1, c + 1),
                        format!("not a number: `{tok}`"),
                    )
                })
            })
            .collect::<Result<_>>()?;
        if let Some(first) = rows.first() {
            if row.len() != first.len() {
                return Err(Error::parse(
                    format!("{source}:row {}", r + 1),
                    format!("expected {} columns, found {}", first.len(), row.len()),
                ));
            }
        }
        rows.push(row);
    }
    let (nr, nc) = (rows.len(), rows[0].len());
    Ok(DMatrix::from_fn(nr, nc, |i, j| rows[i][j]))
}

pub fn format_matrix_csv(m: &DMatrix<f64>) -> String {
    let mut out = String::new();
    for row in m.row_iter() {
        let cells: Vec<String> = row.iter().map(|x| x.to_string()).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

pub fn read_matrix_csv(path: impl AsRef<Path>) -> Result<DMatrix<f64>> {
    let path = path.as_ref();
    parse_matrix_csv(&read_text(path)?, &path.display().to_string())
}

pub fn write_matrix_csv(m: &DMatrix<f64>, path: impl AsRef<Path>) -> Result<()> {
    write_text(path.as_ref(), &format_matrix_csv(m))
}
