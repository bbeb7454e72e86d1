//! Text graph files:
//!
//! ```text
//! p dim <n> <m>
//! c free-form comment
//! e <u> <v> <w>
//! ```
//!
//! Vertex ids are 1-based in files and 0-based in memory; `w` is a
//! nonnegative integer or `inf`.

use std::collections::HashSet;
use std::fmt::Write as _;

use dimp8::{Edge, Graph, Matching, Weight};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}: {reason}")]
pub struct ParseError {
    pub line: usize,
    pub reason: String,
}

fn err(line: usize, reason: impl Into<String>) -> ParseError {
    ParseError {
        line,
        reason: reason.into(),
    }
}

fn vertex(tok: Option<&str>, n: usize, line: usize) -> Result<usize, ParseError> {
    let tok = tok.ok_or_else(|| err(line, "missing vertex id"))?;
    let v: usize = tok.parse().map_err(|_| err(line, format!("bad vertex id {tok:?}")))?;
    if v == 0 || v > n {
        return Err(err(line, format!("vertex id {v} out of range 1..={n}")));
    }
    Ok(v - 1)
}

/// Lines that carry content, numbered from 1; comments and blanks dropped.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('c'))
}

pub fn parse_graph(text: &str) -> Result<Graph, ParseError> {
    let mut lines = content_lines(text);
    let (hline, header) = lines.next().ok_or_else(|| err(1, "missing header"))?;
    let mut toks = header.split_whitespace();
    if toks.next() != Some("p") {
        return Err(err(hline, "missing header"));
    }
    if toks.next() != Some("dim") {
        return Err(err(hline, "header must start with \"p dim\""));
    }
    let mut count = |what: &str| -> Result<usize, ParseError> {
        let t = toks.next().ok_or_else(|| err(hline, format!("header lacks {what}")))?;
        t.parse().map_err(|_| err(hline, format!("bad {what} {t:?}")))
    };
    let n = count("vertex count")?;
    let m = count("edge count")?;
    if toks.next().is_some() {
        return Err(err(hline, "trailing tokens in header"));
    }

    let mut edges = Vec::with_capacity(m);
    let mut seen = HashSet::with_capacity(m);
    let mut last = hline;
    for (line, l) in lines {
        last = line;
        let mut toks = l.split_whitespace();
        if toks.next() != Some("e") {
            return Err(err(line, format!("unexpected line {l:?}")));
        }
        let u = vertex(toks.next(), n, line)?;
        let v = vertex(toks.next(), n, line)?;
        if u == v {
            return Err(err(line, "self-loop"));
        }
        let wt = toks.next().ok_or_else(|| err(line, "missing weight"))?;
        let w: Weight = wt.parse().map_err(|_| err(line, format!("bad weight {wt:?}")))?;
        if toks.next().is_some() {
            return Err(err(line, "trailing tokens"));
        }
        if !seen.insert(Edge::new(u, v)) {
            return Err(err(line, format!("duplicate edge {} {}", u + 1, v + 1)));
        }
        edges.push((u, v, w));
    }
    if edges.len() != m {
        return Err(err(last, format!("header announces {m} edges, found {}", edges.len())));
    }
    Graph::build(n, edges).map_err(|e| err(hline, e.to_string()))
}

/// Matching files hold `e <u> <v>` lines; the pairs must be edges of `g`.
pub fn parse_matching(text: &str, g: &Graph) -> Result<Matching, ParseError> {
    let mut m = Matching::new();
    for (line, l) in content_lines(text) {
        let mut toks = l.split_whitespace();
        if toks.next() != Some("e") {
            return Err(err(line, format!("unexpected line {l:?}")));
        }
        let u = vertex(toks.next(), g.n(), line)?;
        let v = vertex(toks.next(), g.n(), line)?;
        if !g.has_edge(u, v) {
            return Err(err(line, format!("{} {} is not an edge of the graph", u + 1, v + 1)));
        }
        m.insert(Edge::new(u, v));
    }
    Ok(m)
}

pub fn write_graph(g: &Graph, comments: &[String]) -> String {
    let mut out = format!("p dim {} {}\n", g.n(), g.m());
    for c in comments {
        let _ = writeln!(out, "c {c}");
    }
    for (e, w) in g.weighted_edges() {
        let _ = writeln!(out, "e {} {} {}", e.u() + 1, e.v() + 1, w);
    }
    out
}

pub fn write_matching(m: &Matching) -> String {
    m.iter().map(|e| format!("e {} {}\n", e.u() + 1, e.v() + 1)).collect()
}
