//! Plain-text graph files.
//!
//! ```text
//! # comment
//! n m
//! a b      (m lines, 0-based endpoints)
//! ```

use std::fs;
use std::path::Path;

use ustlab_core::{Edge, Graph};

use crate::error::{LabError, LabResult};

pub fn parse_graph(text: &str, path: &Path) -> LabResult<Graph> {
    let err = |line: usize, message: String| LabError::Parse {
        path: path.to_path_buf(),
        line,
        message,
    };
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());
    let (hline, header) = lines.next().ok_or_else(|| err(1, "missing 'n m' header".into()))?;
    let (n, m) = two_numbers(header).ok_or_else(|| err(hline, format!("expected 'n m', got '{header}'")))?;
    let mut edges = Vec::with_capacity(m);
    for (line, body) in lines.by_ref() {
        let (a, b) = two_numbers(body).ok_or_else(|| err(line, format!("expected 'a b', got '{body}'")))?;
        if a >= n || b >= n {
            return Err(err(line, format!("endpoint out of range for n = {n}")));
        }
        edges.push(Edge::new(a, b).map_err(|e| err(line, e.to_string()))?);
    }
    if edges.len() != m {
        return Err(err(hline, format!("header promises {m} edges, found {}", edges.len())));
    }
    Graph::from_edges(n, edges).map_err(|e| err(hline, e.to_string()))
}

fn two_numbers(s: &str) -> Option<(usize, usize)> {
    let mut it = s.split_whitespace().map(str::parse::<usize>);
    match (it.next(), it.next(), it.next()) {
        (Some(Ok(a)), Some(Ok(b)), None) => Some((a, b)),
        _ => None,
    }
}

pub fn read_graph(path: &Path) -> LabResult<Graph> {
    let text = fs::read_to_string(path).map_err(|source| LabError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_graph(&text, path)
}

pub fn format_graph(g: &Graph) -> String {
    let mut out = format!("{} {}\n", g.n(), g.edge_count());
    for e in g.edges() {
        out.push_str(&format!("{} {}\n", e.lo(), e.hi()));
    }
    out
}
