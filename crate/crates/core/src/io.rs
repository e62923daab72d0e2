//! File formats and result serialization.
//!
//! Graph/trigraph text format: header `tgf <n>`, then `b u v` (black) and
//! `r u v` (red) lines, 0-indexed, `#` comments. Graphs use only `b` lines.
//! Problem payloads ride in the same file: `w v q` vertex weights,
//! `d v k` demands, `ew u v q` edge weights, `y u v` prescribed edges,
//! `g v k` host labels, `gh v k` pattern labels, `tw v1 .. vh q` tuple
//! weights, `l v name` vertex names.
//!
//! Sequence format: header `seq <n>`, lines `c u v w` contracting `u, v`
//! into fresh id `w`; fresh ids start at `n`.

use crate::contraction::{ContractionSequence, ContractionStep};
use crate::error::{Error, Result};
use crate::trigraph::Trigraph;
use crate::Q;
use serde::Serialize;
use std::collections::BTreeMap;
use std::str::FromStr;

/// Parsed graph file with optional per-problem payloads.
#[derive(Debug, Clone)]
pub struct GraphFile {
    pub trigraph: Trigraph,
    pub vertex_weights: Option<Vec<Q>>,
    pub demands: Option<Vec<u32>>,
    pub edge_weights: BTreeMap<(usize, usize), Q>,
    pub prescribed: Option<Vec<(usize, usize)>>,
    pub host_labels: Option<Vec<u32>>,
    pub pattern_labels: Option<Vec<u32>>,
    pub tuple_weights: Vec<(Vec<usize>, Q)>,
}

pub fn parse_rational(s: &str) -> Result<Q> {
    let parse_int = |t: &str| {
        i64::from_str(t).map_err(|_| Error::invalid(format!("bad rational component '{t}'")))
    };
    if let Some((p, q)) = s.split_once('/') {
        let denom = parse_int(q)?;
        if denom == 0 {
            return Err(Error::invalid("zero denominator"));
        }
        Ok(Q::new(parse_int(p)?, denom))
    } else {
        Ok(Q::from_integer(parse_int(s)?))
    }
}

pub fn format_rational(v: &Q) -> String {
    format!("{}/{}", v.numer(), v.denom())
}

pub fn parse_graph_file(text: &str) -> Result<GraphFile> {
    let mut n: Option<usize> = None;
    let mut black = Vec::new();
    let mut red = Vec::new();
    let mut weights: Vec<(usize, Q)> = Vec::new();
    let mut demands: Vec<(usize, u32)> = Vec::new();
    let mut edge_weights = BTreeMap::new();
    let mut prescribed: Option<Vec<(usize, usize)>> = None;
    let mut host_labels: Vec<(usize, u32)> = Vec::new();
    let mut pattern_labels: Vec<(usize, u32)> = Vec::new();
    let mut tuple_weights = Vec::new();
    let mut names: Vec<(usize, String)> = Vec::new();

    let err = |line: usize, msg: &str| Error::Parse { line, msg: msg.to_string() };
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut tok = line.split_whitespace();
        let head = tok.next().unwrap();
        let rest: Vec<&str> = tok.collect();
        let usize_at = |i: usize| -> Result<usize> {
            rest.get(i)
                .ok_or_else(|| err(line_no, "missing field"))?
                .parse::<usize>()
                .map_err(|_| err(line_no, "bad integer"))
        };
        match head {
            "tgf" => {
                if n.is_some() {
                    return Err(err(line_no, "duplicate header"));
                }
                n = Some(usize_at(0)?);
            }
            "b" => black.push((usize_at(0)?, usize_at(1)?)),
            "r" => red.push((usize_at(0)?, usize_at(1)?)),
            "w" => weights.push((
                usize_at(0)?,
                parse_rational(rest.get(1).ok_or_else(|| err(line_no, "missing weight"))?)?,
            )),
            "d" => demands.push((
                usize_at(0)?,
                rest.get(1)
                    .ok_or_else(|| err(line_no, "missing demand"))?
                    .parse::<u32>()
                    .map_err(|_| err(line_no, "bad demand"))?,
            )),
            "ew" => {
                let (u, v) = (usize_at(0)?, usize_at(1)?);
                let q = parse_rational(rest.get(2).ok_or_else(|| err(line_no, "missing weight"))?)?;
                edge_weights.insert((u.min(v), u.max(v)), q);
            }
            "y" => {
                let (u, v) = (usize_at(0)?, usize_at(1)?);
                prescribed.get_or_insert_with(Vec::new).push((u.min(v), u.max(v)));
            }
            "g" => host_labels.push((usize_at(0)?, usize_at(1)? as u32)),
            "gh" => pattern_labels.push((usize_at(0)?, usize_at(1)? as u32)),
            "tw" => {
                if rest.len() < 2 {
                    return Err(err(line_no, "tuple weight needs vertices and a weight"));
                }
                let mut tuple = Vec::new();
                for t in &rest[..rest.len() - 1] {
                    tuple.push(t.parse::<usize>().map_err(|_| err(line_no, "bad vertex"))?);
                }
                tuple_weights.push((tuple, parse_rational(rest[rest.len() - 1])?));
            }
            "l" => names.push((
                usize_at(0)?,
                rest.get(1).ok_or_else(|| err(line_no, "missing name"))?.to_string(),
            )),
            _ => return Err(err(line_no, &format!("unknown directive '{head}'"))),
        }
    }
    let n = n.ok_or_else(|| Error::invalid("missing 'tgf <n>' header"))?;
    let mut trigraph = Trigraph::from_edges(n, &black, &red)?;
    if !names.is_empty() {
        let mut labels: Vec<String> = (0..n).map(|v| v.to_string()).collect();
        for (v, name) in names {
            if v >= n {
                return Err(Error::invalid(format!("label vertex {v} out of range")));
            }
            labels[v] = name;
        }
        trigraph = trigraph.with_labels(labels)?;
    }
    let fill = |pairs: Vec<(usize, Q)>| -> Result<Option<Vec<Q>>> {
        if pairs.is_empty() {
            return Ok(None);
        }
        let mut out = vec![Q::from_integer(1); n];
        for (v, q) in pairs {
            if v >= n {
                return Err(Error::invalid(format!("vertex {v} out of range")));
            }
            out[v] = q;
        }
        Ok(Some(out))
    };
    let vertex_weights = fill(weights)?;
    let demands = if demands.is_empty() {
        None
    } else {
        let mut out = vec![1u32; n];
        for (v, k) in demands {
            if v >= n || k == 0 {
                return Err(Error::invalid("bad demand line"));
            }
            out[v] = k;
        }
        Some(out)
    };
    let labels_of = |pairs: Vec<(usize, u32)>| -> Result<Option<Vec<u32>>> {
        if pairs.is_empty() {
            return Ok(None);
        }
        let mut out = vec![1u32; n];
        for (v, k) in pairs {
            if v >= n {
                return Err(Error::invalid(format!("vertex {v} out of range")));
            }
            out[v] = k;
        }
        Ok(Some(out))
    };
    let host_labels = labels_of(host_labels)?;
    let pattern_labels = labels_of(pattern_labels)?;
    Ok(GraphFile {
        trigraph,
        vertex_weights,
        demands,
        edge_weights,
        prescribed,
        host_labels,
        pattern_labels,
        tuple_weights,
    })
}

pub fn write_graph_file(g: &Trigraph) -> String {
    let mut out = format!("tgf {}\n", g.n());
    for (u, v) in g.black_edges() {
        out.push_str(&format!("b {u} {v}\n"));
    }
    for (u, v) in g.red_edges() {
        out.push_str(&format!("r {u} {v}\n"));
    }
    out
}

pub fn parse_sequence_file(text: &str) -> Result<ContractionSequence> {
    let mut n: Option<usize> = None;
    let mut steps = Vec::new();
    let err = |line: usize, msg: &str| Error::Parse { line, msg: msg.to_string() };
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        match fields[0] {
            "seq" => {
                n = Some(
                    fields
                        .get(1)
                        .ok_or_else(|| err(line_no, "missing n"))?
                        .parse()
                        .map_err(|_| err(line_no, "bad n"))?,
                );
            }
            "c" => {
                if fields.len() != 4 {
                    return Err(err(line_no, "contraction line needs 'c u v w'"));
                }
                let parse = |s: &str| s.parse::<usize>().map_err(|_| err(line_no, "bad id"));
                steps.push(ContractionStep {
                    u: parse(fields[1])?,
                    v: parse(fields[2])?,
                    merged: parse(fields[3])?,
                });
            }
            other => return Err(err(line_no, &format!("unknown directive '{other}'"))),
        }
    }
    let n = n.ok_or_else(|| Error::invalid("missing 'seq <n>' header"))?;
    // steps are order-independent to parse: sort by fresh id before validating
    steps.sort_by_key(|s| s.merged);
    ContractionSequence::new(n, steps)
}

pub fn write_sequence_file(seq: &ContractionSequence) -> String {
    let mut out = format!("seq {}\n", seq.origin_n());
    for s in seq.steps() {
        out.push_str(&format!("c {} {} {}\n", s.u, s.v, s.merged));
    }
    out
}

/// JSON result schema, version `v1`. Field order is the declaration order.
#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub schema: &'static str,
    pub problem: String,
    pub n: usize,
    pub value: String,
    pub certified_bound: String,
    pub solution: serde_json::Value,
    pub trace: TraceReport,
}

#[derive(Debug, Clone, Serialize)]
pub struct TraceReport {
    pub depth: u32,
    pub calls: u64,
    pub oracle_calls: u64,
    pub max_oracle_n: usize,
    pub d_eff_levels: Vec<usize>,
    pub max_base_n_levels: Vec<usize>,
    pub calls_levels: Vec<u64>,
    pub max_expansion: f64,
    pub fallbacks: u64,
    pub ms: u128,
}
