//! Text formats.
//!
//! Edge list: a header `n m W` (`W` = 1 when weights follow), then `m` lines
//! `u v` or `u v w`, 0-indexed. Fault file: one edge id or one `u v` pair per
//! line. Blank lines and lines starting with `#` are skipped in both.

use std::fmt::Write as _;

use super::{EdgeId, FaultSet, Graph};
use crate::{Error, Result};

fn data_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn parse_field<T: std::str::FromStr>(tok: Option<&str>, line: usize, what: &str) -> Result<T> {
    let tok = tok.ok_or_else(|| Error::Parse {
        line,
        msg: format!("missing {what}"),
    })?;
    tok.parse().map_err(|_| Error::Parse {
        line,
        msg: format!("bad {what} `{tok}`"),
    })
}

pub fn parse_edge_list(text: &str) -> Result<Graph> {
    let mut lines = data_lines(text);
    let (hline, header) = lines.next().ok_or(Error::Parse {
        line: 1,
        msg: "empty edge list".into(),
    })?;
    let mut tok = header.split_whitespace();
    let n: usize = parse_field(tok.next(), hline, "node count")?;
    let m: usize = parse_field(tok.next(), hline, "edge count")?;
    let weighted: u8 = parse_field(tok.next(), hline, "weight flag")?;
    if weighted > 1 {
        return Err(Error::Parse {
            line: hline,
            msg: format!("weight flag must be 0 or 1, got {weighted}"),
        });
    }
    let mut g = Graph::new(n);
    for (line, body) in lines.by_ref().take(m) {
        let mut tok = body.split_whitespace();
        let u: usize = parse_field(tok.next(), line, "endpoint")?;
        let v: usize = parse_field(tok.next(), line, "endpoint")?;
        let w: f64 = if weighted == 1 {
            parse_field(tok.next(), line, "weight")?
        } else {
            1.0
        };
        if tok.next().is_some() {
            return Err(Error::Parse {
                line,
                msg: "trailing fields".into(),
            });
        }
        g.add_edge(u, v, w).map_err(|e| Error::Parse {
            line,
            msg: e.to_string(),
        })?;
    }
    if g.m() != m {
        return Err(Error::Parse {
            line: hline,
            msg: format!("header promises {m} edges, found {}", g.m()),
        });
    }
    if let Some((line, _)) = lines.next() {
        return Err(Error::Parse {
            line,
            msg: "data after the last edge".into(),
        });
    }
    Ok(g)
}

/// Writes `g` in edge-list form; weights are written unless all are 1.
pub fn write_edge_list(g: &Graph) -> String {
    let weighted = !g.is_unweighted();
    let mut out = String::new();
    let _ = writeln!(out, "{} {} {}", g.n(), g.m(), u8::from(weighted));
    for e in g.edges() {
        if weighted {
            let _ = writeln!(out, "{} {} {}", e.u, e.v, e.w);
        } else {
            let _ = writeln!(out, "{} {}", e.u, e.v);
        }
    }
    out
}

pub fn parse_fault_file(g: &Graph, text: &str) -> Result<FaultSet> {
    let mut fs = FaultSet::empty(g);
    for (line, body) in data_lines(text) {
        let toks: Vec<&str> = body.split_whitespace().collect();
        let e: EdgeId = match toks.as_slice() {
            [id] => parse_field(Some(id), line, "edge id")?,
            [u, v] => {
                let u: usize = parse_field(Some(u), line, "endpoint")?;
                let v: usize = parse_field(Some(v), line, "endpoint")?;
                g.find_edge(u, v).ok_or(Error::Parse {
                    line,
                    msg: format!("no edge ({u}, {v})"),
                })?
            }
            _ => {
                return Err(Error::Parse {
                    line,
                    msg: "expected `id` or `u v`".into(),
                })
            }
        };
        fs.insert(g, e).map_err(|err| Error::Parse {
            line,
            msg: err.to_string(),
        })?;
    }
    Ok(fs)
}

/// One `u v` pair per line, in edge-id order.
pub fn write_fault_file(g: &Graph, faults: &FaultSet) -> String {
    let mut out = String::new();
    for e in faults.edges() {
        let edge = g.edge(e);
        let _ = writeln!(out, "{} {}", edge.u, edge.v);
    }
    out
}
