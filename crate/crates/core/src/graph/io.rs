//! Plain-text edge lists.
//!
//! ```text
//! # comment
//! n m
//! u v w [id]
//! ```
//!
//! Vertices are 0-based, `w` is an integer, a decimal or `p/q`. Blank lines
//! and `#` comments are ignored. Edges without an explicit id get their line
//! position (0-based among edge lines).

use std::collections::HashSet;
use std::fmt::Write as _;

use num_traits::Zero;

use super::{format_rational, parse_rational, Edge, WeightedMultigraph};
use crate::error::{Error, Result};

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

pub fn load_graph(text: &str) -> Result<WeightedMultigraph> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());

    let (header_line, header) = lines.next().ok_or_else(|| parse_err(1, "missing header `n m`"))?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    let [n, m] = fields[..] else {
        return Err(parse_err(header_line, "header must be `n m`"));
    };
    let n: usize = n
        .parse()
        .map_err(|_| parse_err(header_line, format!("bad vertex count `{n}`")))?;
    let m: usize = m
        .parse()
        .map_err(|_| parse_err(header_line, format!("bad edge count `{m}`")))?;

    let mut edges = Vec::with_capacity(m);
    let mut explicit = HashSet::new();
    for (pos, (line, body)) in lines.enumerate() {
        if pos >= m {
            return Err(parse_err(line, format!("more than the declared {m} edges")));
        }
        let fields: Vec<&str> = body.split_whitespace().collect();
        if fields.len() != 3 && fields.len() != 4 {
            return Err(parse_err(line, "edge line must be `u v w [id]`"));
        }
        let vertex = |s: &str| -> Result<usize> {
            let x: usize = s
                .parse()
                .map_err(|_| parse_err(line, format!("bad vertex `{s}`")))?;
            if x >= n {
                return Err(parse_err(line, format!("vertex {x} out of range (n = {n})")));
            }
            Ok(x)
        };
        let u = vertex(fields[0])?;
        let v = vertex(fields[1])?;
        if u == v {
            return Err(parse_err(line, format!("self-loop at vertex {u}")));
        }
        let weight = parse_rational(fields[2])
            .ok_or_else(|| parse_err(line, format!("bad weight `{}`", fields[2])))?;
        if weight <= Zero::zero() {
            return Err(parse_err(line, format!("non-positive weight `{}`", fields[2])));
        }
        let id = match fields.get(3) {
            Some(s) => {
                let id: usize = s
                    .parse()
                    .map_err(|_| parse_err(line, format!("bad edge id `{s}`")))?;
                if !explicit.insert(id) {
                    return Err(parse_err(line, format!("duplicate edge id {id}")));
                }
                id
            }
            None => pos,
        };
        edges.push((line, Edge { id, u, v, weight }));
    }
    if edges.len() != m {
        return Err(parse_err(
            text.lines().count().max(1),
            format!("expected {m} edges, found {}", edges.len()),
        ));
    }
    let mut seen = vec![false; m];
    for (line, e) in &edges {
        if e.id >= m || seen[e.id] {
            return Err(parse_err(
                *line,
                format!("edge id {} collides or lies outside 0..{m}", e.id),
            ));
        }
        seen[e.id] = true;
    }
    WeightedMultigraph::from_edges(n, edges.into_iter().map(|(_, e)| e).collect())
}

/// Writes the graph with explicit ids; `load_graph` reads it back exactly.
pub fn write_graph(g: &WeightedMultigraph) -> String {
    let mut out = format!("{} {}\n", g.n(), g.m());
    for e in g.edges() {
        let _ = writeln!(out, "{} {} {} {}", e.u, e.v, format_rational(&e.weight), e.id);
    }
    out
}
