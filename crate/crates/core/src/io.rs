//! The `p bisect` text format.
//!
//! ```text
//! c optional comment lines
//! p bisect <n> <m>
//! e <u> <v> <w>
//! ```
//!
//! Endpoints are 1-indexed; `w` is an integer, a decimal or `p/q`. Repeated
//! `e` lines between the same endpoints are parallel edges. Edge ids are
//! assigned `0..m` in file order.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::graph::WeightedMultigraph;
use crate::rational::{parse_rational, to_text};

pub fn parse_graph(text: &str) -> Result<WeightedMultigraph> {
    let mut header: Option<(usize, usize)> = None;
    let mut g = WeightedMultigraph::new(0);
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        let at = |msg: String| Error::Parse(format!("line {}: {msg}", lineno + 1));
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        match fields[0] {
            "p" => {
                if header.is_some() {
                    return Err(at("second header".into()));
                }
                if fields.len() != 4 || fields[1] != "bisect" {
                    return Err(at("expected `p bisect <n> <m>`".into()));
                }
                let n = fields[2].parse().map_err(|_| at(format!("bad vertex count `{}`", fields[2])))?;
                let m = fields[3].parse().map_err(|_| at(format!("bad edge count `{}`", fields[3])))?;
                header = Some((n, m));
                g = WeightedMultigraph::new(n);
            }
            "e" => {
                if header.is_none() {
                    return Err(at("edge before header".into()));
                }
                if fields.len() != 4 {
                    return Err(at("expected `e <u> <v> <w>`".into()));
                }
                let endpoint = |s: &str| -> Result<usize> {
                    match s.parse::<usize>() {
                        Ok(v) if v >= 1 => Ok(v - 1),
                        _ => Err(at(format!("bad endpoint `{s}`"))),
                    }
                };
                let u = endpoint(fields[1])?;
                let v = endpoint(fields[2])?;
                let w = parse_rational(fields[3]).map_err(|e| at(e.to_string()))?;
                g.add_edge(u, v, w).map_err(|e| at(e.to_string()))?;
            }
            other => return Err(at(format!("unknown line type `{other}`"))),
        }
    }
    let (_, m) = header.ok_or_else(|| Error::Parse("missing `p bisect` header".into()))?;
    if g.m() != m {
        return Err(Error::Parse(format!("header declares {m} edges, found {}", g.m())));
    }
    Ok(g)
}

/// Canonical text: header, then one line per edge in storage order, with
/// weights in their shortest exact form.
pub fn write_graph(g: &WeightedMultigraph) -> String {
    let mut out = String::new();
    writeln!(out, "p bisect {} {}", g.n(), g.m()).unwrap();
    for e in g.edges() {
        writeln!(out, "e {} {} {}", e.u + 1, e.v + 1, to_text(&e.weight)).unwrap();
    }
    out
}
