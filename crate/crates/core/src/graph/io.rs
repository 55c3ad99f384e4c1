//! Plain-text edge lists.
//!
//! ```text
//! # comment
//! n m
//! u v [w]
//! ```
//! Endpoints are 0-based, `w` is a decimal (`0.25`, `1e-3`) or a fraction
//! (`3/8`) and defaults to 1. Weights are written with the shortest decimal
//! that round-trips exactly, so `store(load(f))` reproduces the same graph.

use super::StaticGraph;
use crate::error::{Error, Result};
use std::collections::HashMap;
use std::io::Write;
use std::path::Path;

fn parse_err<T>(line: usize, msg: impl Into<String>) -> Result<T> {
    Err(Error::Parse {
        line,
        msg: msg.into(),
    })
}

fn parse_weight(tok: &str, line: usize) -> Result<f64> {
    let w = match tok.split_once('/') {
        Some((num, den)) => {
            let num: f64 = num
                .parse()
                .or_else(|_| parse_err(line, format!("bad numerator '{num}'")))?;
            let den: f64 = den
                .parse()
                .or_else(|_| parse_err(line, format!("bad denominator '{den}'")))?;
            num / den
        }
        None => tok
            .parse()
            .or_else(|_| parse_err(line, format!("bad weight '{tok}'")))?,
    };
    if !(w.is_finite() && w > 0.0) {
        return parse_err(line, format!("weight must be positive, got '{tok}'"));
    }
    Ok(w)
}

pub fn parse_edge_list(text: &str) -> Result<StaticGraph> {
    let mut header: Option<(usize, usize)> = None;
    let mut edges: Vec<(usize, usize, f64)> = Vec::new();
    let mut seen: HashMap<(usize, usize), (f64, usize)> = HashMap::new();
    let mut weighted = false;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let toks: Vec<&str> = body.split_whitespace().collect();
        let Some((n, _)) = header else {
            if toks.len() != 2 {
                return parse_err(line, "header must be 'n m'");
            }
            let n = toks[0]
                .parse()
                .or_else(|_| parse_err(line, "bad vertex count"))?;
            let m = toks[1]
                .parse()
                .or_else(|_| parse_err(line, "bad edge count"))?;
            header = Some((n, m));
            continue;
        };
        if !(2..=3).contains(&toks.len()) {
            return parse_err(line, "expected 'u v [w]'");
        }
        let u: usize = toks[0]
            .parse()
            .or_else(|_| parse_err(line, format!("bad endpoint '{}'", toks[0])))?;
        let v: usize = toks[1]
            .parse()
            .or_else(|_| parse_err(line, format!("bad endpoint '{}'", toks[1])))?;
        if u >= n || v >= n {
            return parse_err(line, format!("endpoint out of range for n={n}"));
        }
        if u == v {
            return parse_err(line, format!("self-loop at vertex {u}"));
        }
        let w = match toks.get(2) {
            Some(tok) => {
                weighted = true;
                parse_weight(tok, line)?
            }
            None => 1.0,
        };
        let key = (u.min(v), u.max(v));
        if let Some(&(prev, at)) = seen.get(&key) {
            if prev != w {
                return parse_err(
                    line,
                    format!("edge {key:?} repeats line {at} with a different weight"),
                );
            }
            continue;
        }
        seen.insert(key, (w, line));
        edges.push((key.0, key.1, w));
    }
    let Some((n, m)) = header else {
        return parse_err(1, "missing 'n m' header");
    };
    if edges.len() != m {
        return parse_err(
            text.lines().count().max(1),
            format!("header announces {m} edges, found {}", edges.len()),
        );
    }
    let g = if weighted {
        StaticGraph::from_weighted_edges(n, edges)?
    } else {
        StaticGraph::from_pairs(n, edges.into_iter().map(|(u, v, _)| (u, v)))?
    };
    Ok(g)
}

pub fn load_edge_list(path: impl AsRef<Path>) -> Result<StaticGraph> {
    parse_edge_list(&std::fs::read_to_string(path)?)
}

pub fn write_edge_list<W: Write>(g: &StaticGraph, mut out: W) -> Result<()> {
    writeln!(out, "{} {}", g.n(), g.num_edges())?;
    for e in g.edges() {
        if g.is_weighted() {
            writeln!(out, "{} {} {}", e.u, e.v, e.w)?;
        } else {
            writeln!(out, "{} {}", e.u, e.v)?;
        }
    }
    Ok(())
}

pub fn store_edge_list(g: &StaticGraph, path: impl AsRef<Path>) -> Result<()> {
    let file = std::fs::File::create(path)?;
    let mut buf = std::io::BufWriter::new(file);
    write_edge_list(g, &mut buf)?;
    buf.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::generators::complete;
    use proptest::prelude::*;

    #[test]
    fn empty_graph_file() {
        let g = parse_edge_list("0 0\n").unwrap();
        assert_eq!((g.n(), g.num_edges()), (0, 0));
    }

    #[test]
    fn k4_file() {
        let text = "# K4\n4 6\n0 1\n0 2\n0 3\n1 2\n1 3\n2 3\n";
        let g = parse_edge_list(text).unwrap();
        assert_eq!(g, complete(4));
    }

    #[test]
    fn fractions_and_decimals() {
        let g = parse_edge_list("3 2\n0 1 3/8\n1 2 0.5 # half\n").unwrap();
        assert_eq!(g.weight(0, 1), Some(0.375));
        assert_eq!(g.weight(2, 1), Some(0.5));
    }

    #[test]
    fn errors_carry_line_numbers() {
        let cases = [
            ("3 1\n1 1\n", 2),
            ("3 1\n0 x\n", 2),
            ("3 2\n0 1 2\n1 0 3\n", 3),
            ("3 1\n0 1 -2\n", 2),
            ("3 1\n0 5\n", 2),
            ("# only\n3\n", 2),
        ];
        for (text, want) in cases {
            match parse_edge_list(text) {
                Err(Error::Parse { line, .. }) => assert_eq!(line, want, "{text:?}"),
                other => panic!("expected parse error for {text:?}, got {other:?}"),
            }
        }
    }

    #[test]
    fn edge_count_mismatch() {
        assert!(matches!(
            parse_edge_list("3 2\n0 1\n"),
            Err(Error::Parse { .. })
        ));
    }

    #[test]
    fn store_then_load_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("g.edges");
        let g = StaticGraph::from_weighted_edges(4, [(0, 1, 0.1), (2, 3, 1.0 / 3.0)]).unwrap();
        store_edge_list(&g, &path).unwrap();
        assert_eq!(load_edge_list(&path).unwrap(), g);
    }

    proptest! {
        #[test]
        fn weighted_round_trip_is_exact(
            edges in proptest::collection::vec((0usize..9, 0usize..9, 1e-6f64..1e6), 0..40)
        ) {
            let edges: Vec<_> = edges.into_iter().filter(|(u, v, _)| u != v).collect();
            let g = StaticGraph::from_weighted_edges(9, edges).unwrap();
            let mut buf = Vec::new();
            write_edge_list(&g, &mut buf).unwrap();
            let back = parse_edge_list(std::str::from_utf8(&buf).unwrap()).unwrap();
            prop_assert_eq!(back.edges().collect::<Vec<_>>(), g.edges().collect::<Vec<_>>());
        }
    }
}
