//! Text formats.
//!
//! Edge list: a header `n m`, then `m` lines `u v w` (0-based ids, `w` a
//! decimal or `p/q`). Plane graphs append rotation lines `R v e1 e2 …`
//! listing edge ids (input line order) clockwise around `v`. Blank lines and
//! `#` comments are ignored.

use std::fmt::Write as _;

use num_rational::BigRational;

use super::{VertexId, WeightedGraph};
use crate::error::{IglError, Result};
use crate::scalar::{parse_rational, Scalar};

#[derive(Clone, Debug)]
pub struct ParsedGraph {
    pub n: usize,
    pub edges: Vec<(VertexId, VertexId, BigRational)>,
    /// Clockwise edge ids per vertex, when rotation lines are present.
    pub rotation: Option<Vec<Vec<usize>>>,
}

impl ParsedGraph {
    pub fn graph(&self) -> Result<WeightedGraph<BigRational>> {
        WeightedGraph::from_edges(self.n, self.edges.iter().cloned())
    }
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let l = l.split('#').next().unwrap_or("").trim();
        (!l.is_empty()).then_some((i + 1, l))
    })
}

fn num<N: std::str::FromStr>(tok: Option<&str>, line: usize, what: &str) -> Result<N> {
    tok.ok_or_else(|| IglError::parse(line, format!("missing {what}")))?
        .parse()
        .map_err(|_| IglError::parse(line, format!("bad {what}")))
}

pub fn parse_graph(text: &str) -> Result<ParsedGraph> {
    let mut lines = content_lines(text);
    let (hl, header) = lines.next().ok_or_else(|| IglError::parse(1, "empty input"))?;
    let mut it = header.split_whitespace();
    let n: usize = num(it.next(), hl, "vertex count")?;
    let m: usize = num(it.next(), hl, "edge count")?;
    if it.next().is_some() {
        return Err(IglError::parse(hl, "header must be 'n m'"));
    }
    let mut edges = Vec::with_capacity(m);
    let mut rotation: Option<Vec<Vec<usize>>> = None;
    for (ln, line) in lines {
        let mut it = line.split_whitespace();
        let first = it.next().unwrap();
        if first == "R" {
            let v: usize = num(it.next(), ln, "vertex id")?;
            if v >= n {
                return Err(IglError::parse(ln, format!("vertex {v} out of range")));
            }
            let rot = rotation.get_or_insert_with(|| vec![Vec::new(); n]);
            if !rot[v].is_empty() {
                return Err(IglError::parse(ln, format!("duplicate rotation for vertex {v}")));
            }
            for tok in it {
                let e: usize = tok.parse().map_err(|_| IglError::parse(ln, "bad edge id"))?;
                if e >= m {
                    return Err(IglError::parse(ln, format!("edge id {e} out of range")));
                }
                rot[v].push(e);
            }
            continue;
        }
        if rotation.is_some() {
            return Err(IglError::parse(ln, "edge line after rotation lines"));
        }
        let u: usize = first.parse().map_err(|_| IglError::parse(ln, "bad vertex id"))?;
        let v: usize = num(it.next(), ln, "vertex id")?;
        let w = parse_rational(it.next().ok_or_else(|| IglError::parse(ln, "missing weight"))?)
            .map_err(|e| IglError::parse(ln, e.to_string()))?;
        if it.next().is_some() {
            return Err(IglError::parse(ln, "trailing tokens"));
        }
        if u >= n || v >= n {
            return Err(IglError::parse(ln, format!("edge ({u},{v}) out of range")));
        }
        if u == v {
            return Err(IglError::parse(ln, format!("self-loop at {u}")));
        }
        if !Scalar::is_positive(&w) {
            return Err(IglError::parse(ln, "edge length must be positive"));
        }
        edges.push((u, v, w));
    }
    if edges.len() != m {
        return Err(IglError::parse(0, format!("expected {m} edges, found {}", edges.len())));
    }
    Ok(ParsedGraph { n, edges, rotation })
}

pub fn parse_edge_list(text: &str) -> Result<WeightedGraph<BigRational>> {
    parse_graph(text)?.graph()
}

pub fn write_edge_list<T: Scalar>(g: &WeightedGraph<T>) -> String {
    let mut out = format!("{} {}\n", g.n(), g.m());
    for (u, v, w) in g.edges() {
        let w = w.to_fraction().unwrap_or_else(|| format!("{w}"));
        let w = w.strip_suffix("/1").map(str::to_string).unwrap_or(w);
        writeln!(out, "{u} {v} {w}").unwrap();
    }
    out
}
