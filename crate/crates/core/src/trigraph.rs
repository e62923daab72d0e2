//! Trigraphs and vertex partitions.
//!
//! A trigraph carries two disjoint edge sets, black (certain) and red
//! (error). A trigraph without red edges is treated as a plain graph
//! everywhere. Values are immutable after construction; all operations are
//! pure functions returning fresh trigraphs.

use crate::error::{Error, Result};
use std::collections::BTreeMap;
use std::fmt;

/// Relation between a pair of distinct vertices.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug, Hash)]
pub enum EdgeKind {
    Absent,
    Black,
    Red,
}

/// How a red edge is resolved by a cleanup.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Resolution {
    ToBlack,
    ToAbsent,
    KeepRed,
}

/// Dense symmetric trigraph on vertices `0..n`.
#[derive(Clone, PartialEq, Eq)]
pub struct Trigraph {
    n: usize,
    adj: Vec<EdgeKind>,
    labels: Option<Vec<String>>,
}

impl fmt::Debug for Trigraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Trigraph(n={}, black={:?}, red={:?})",
            self.n,
            self.black_edges().collect::<Vec<_>>(),
            self.red_edges().collect::<Vec<_>>()
        )
    }
}

impl Trigraph {
    /// Edgeless trigraph on `n` vertices. `n = 0` is legal.
    pub fn new(n: usize) -> Self {
        Trigraph { n, adj: vec![EdgeKind::Absent; n * n], labels: None }
    }

    pub fn from_edges(n: usize, black: &[(usize, usize)], red: &[(usize, usize)]) -> Result<Self> {
        let mut g = Trigraph::new(n);
        for &(u, v) in black {
            g.insert_edge(u, v, EdgeKind::Black)?;
        }
        for &(u, v) in red {
            if g.edge(u.min(v), u.max(v)) == EdgeKind::Black {
                return Err(Error::invalid(format!("pair {u}-{v} is both black and red")));
            }
            g.insert_edge(u, v, EdgeKind::Red)?;
        }
        Ok(g)
    }

    fn insert_edge(&mut self, u: usize, v: usize, kind: EdgeKind) -> Result<()> {
        if u == v {
            return Err(Error::invalid(format!("self-loop at vertex {u}")));
        }
        if u >= self.n || v >= self.n {
            return Err(Error::invalid(format!("edge {u}-{v} out of range (n={})", self.n)));
        }
        self.adj[u * self.n + v] = kind;
        self.adj[v * self.n + u] = kind;
        Ok(())
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.n {
            return Err(Error::invalid("label count does not match vertex count"));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge(&self, u: usize, v: usize) -> EdgeKind {
        if u == v {
            return EdgeKind::Absent;
        }
        self.adj[u * self.n + v]
    }

    pub fn is_black(&self, u: usize, v: usize) -> bool {
        self.edge(u, v) == EdgeKind::Black
    }

    pub fn label(&self, v: usize) -> String {
        match &self.labels {
            Some(l) => l[v].clone(),
            None => v.to_string(),
        }
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    fn edges_of(&self, kind: EdgeKind) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |u| {
            (u + 1..self.n).filter_map(move |v| (self.edge(u, v) == kind).then_some((u, v)))
        })
    }

    pub fn black_edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges_of(EdgeKind::Black)
    }

    pub fn red_edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges_of(EdgeKind::Red)
    }

    pub fn black_edge_count(&self) -> usize {
        self.black_edges().count()
    }

    pub fn red_edge_count(&self) -> usize {
        self.red_edges().count()
    }

    /// True when the red edge set is empty, i.e. the trigraph is a graph.
    pub fn is_graph(&self) -> bool {
        self.adj.iter().all(|&k| k != EdgeKind::Red)
    }

    pub fn degree(&self, v: usize) -> usize {
        (0..self.n).filter(|&z| self.edge(v, z) != EdgeKind::Absent).count()
    }

    pub fn red_degree(&self, v: usize) -> usize {
        (0..self.n).filter(|&z| self.edge(v, z) == EdgeKind::Red).count()
    }

    pub fn max_degree(&self) -> usize {
        (0..self.n).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    pub fn max_red_degree(&self) -> usize {
        (0..self.n).map(|v| self.red_degree(v)).max().unwrap_or(0)
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = (usize, EdgeKind)> + '_ {
        (0..self.n).filter_map(move |z| {
            let k = self.edge(v, z);
            (k != EdgeKind::Absent).then_some((z, k))
        })
    }

    /// Quotient trigraph `G/P`. Output vertex `i` corresponds to `p.parts()[i]`.
    ///
    /// A part pair is black when every cross pair is black, absent when every
    /// cross pair is absent, and red otherwise (some red cross pair, or a mix
    /// of edges and non-edges).
    pub fn quotient(&self, p: &VertexPartition) -> Result<Trigraph> {
        if p.n() != self.n {
            return Err(Error::invalid("partition does not cover the vertex set"));
        }
        let m = p.parts().len();
        let mut out = Trigraph::new(m);
        for a in 0..m {
            for b in a + 1..m {
                let mut any_black = false;
                let mut any_absent = false;
                let mut any_red = false;
                'scan: for &u in &p.parts()[a] {
                    for &v in &p.parts()[b] {
                        match self.edge(u, v) {
                            EdgeKind::Black => any_black = true,
                            EdgeKind::Absent => any_absent = true,
                            EdgeKind::Red => any_red = true,
                        }
                        if any_red || (any_black && any_absent) {
                            break 'scan;
                        }
                    }
                }
                let kind = if any_red || (any_black && any_absent) {
                    EdgeKind::Red
                } else if any_black {
                    EdgeKind::Black
                } else {
                    EdgeKind::Absent
                };
                if kind != EdgeKind::Absent {
                    out.insert_edge(a, b, kind)?;
                }
            }
        }
        if self.labels.is_some() {
            let labels = p.parts().iter().map(|part| self.merged_label(part)).collect();
            out.labels = Some(labels);
        }
        Ok(out)
    }

    pub(crate) fn merged_label(&self, vs: &[usize]) -> String {
        let mut sorted = vs.to_vec();
        sorted.sort_unstable();
        sorted.iter().map(|&v| self.label(v)).collect::<Vec<_>>().join("")
    }

    /// Cleanup: resolve some red edges into black edges or non-edges.
    /// Keys must be red edges of `self`.
    pub fn cleanup(&self, resolution: &BTreeMap<(usize, usize), Resolution>) -> Result<Trigraph> {
        let mut out = self.clone();
        for (&(u, v), &r) in resolution {
            let (u, v) = (u.min(v), u.max(v));
            if v >= self.n || self.edge(u, v) != EdgeKind::Red {
                return Err(Error::invalid(format!("resolution key {u}-{v} is not a red edge")));
            }
            let kind = match r {
                Resolution::ToBlack => EdgeKind::Black,
                Resolution::ToAbsent => EdgeKind::Absent,
                Resolution::KeepRed => EdgeKind::Red,
            };
            out.adj[u * self.n + v] = kind;
            out.adj[v * self.n + u] = kind;
        }
        Ok(out)
    }

    /// Induced subtrigraph on `s`; returns the trigraph together with the
    /// vertex correspondence (new index -> old index).
    pub fn induced(&self, s: &[usize]) -> Result<(Trigraph, Vec<usize>)> {
        let mut seen = vec![false; self.n];
        for &v in s {
            if v >= self.n {
                return Err(Error::invalid(format!("vertex {v} out of range")));
            }
            if seen[v] {
                return Err(Error::invalid(format!("duplicate vertex {v} in subset")));
            }
            seen[v] = true;
        }
        let mut out = Trigraph::new(s.len());
        for (a, &u) in s.iter().enumerate() {
            for (b, &v) in s.iter().enumerate().skip(a + 1) {
                let k = self.edge(u, v);
                if k != EdgeKind::Absent {
                    out.insert_edge(a, b, k)?;
                }
            }
        }
        if self.labels.is_some() {
            out.labels = Some(s.iter().map(|&v| self.label(v)).collect());
        }
        Ok((out, s.to_vec()))
    }

    /// Red, black and total graph views, all returned with empty red sets.
    pub fn views(&self) -> Views {
        let mut red = Trigraph::new(self.n);
        let mut black = Trigraph::new(self.n);
        let mut total = Trigraph::new(self.n);
        for u in 0..self.n {
            for v in u + 1..self.n {
                match self.edge(u, v) {
                    EdgeKind::Black => {
                        black.insert_edge(u, v, EdgeKind::Black).unwrap();
                        total.insert_edge(u, v, EdgeKind::Black).unwrap();
                    }
                    EdgeKind::Red => {
                        red.insert_edge(u, v, EdgeKind::Black).unwrap();
                        total.insert_edge(u, v, EdgeKind::Black).unwrap();
                    }
                    EdgeKind::Absent => {}
                }
            }
        }
        red.labels = self.labels.clone();
        black.labels = self.labels.clone();
        total.labels = self.labels.clone();
        Views { red_graph: red, black_graph: black, total_graph: total }
    }

    /// Total graph as a standalone trigraph (black = old black plus old red).
    pub fn total_graph(&self) -> Trigraph {
        self.views().total_graph
    }

    /// Black graph as a standalone trigraph (reds dropped).
    pub fn black_graph(&self) -> Trigraph {
        self.views().black_graph
    }
}

pub struct Views {
    pub red_graph: Trigraph,
    pub black_graph: Trigraph,
    pub total_graph: Trigraph,
}

/// Partition of `0..n` into disjoint nonempty parts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexPartition {
    n: usize,
    parts: Vec<Vec<usize>>,
    part_of: Vec<usize>,
}

impl VertexPartition {
    pub fn new(n: usize, parts: Vec<Vec<usize>>) -> Result<Self> {
        let mut part_of = vec![usize::MAX; n];
        for (i, part) in parts.iter().enumerate() {
            if part.is_empty() {
                return Err(Error::invalid("empty part"));
            }
            for &v in part {
                if v >= n {
                    return Err(Error::invalid(format!("vertex {v} out of range in partition")));
                }
                if part_of[v] != usize::MAX {
                    return Err(Error::invalid(format!("vertex {v} covered twice")));
                }
                part_of[v] = i;
            }
        }
        if let Some(v) = part_of.iter().position(|&p| p == usize::MAX) {
            return Err(Error::invalid(format!("vertex {v} not covered")));
        }
        let parts = parts
            .into_iter()
            .map(|mut p| {
                p.sort_unstable();
                p
            })
            .collect();
        Ok(VertexPartition { n, parts, part_of })
    }

    pub fn singletons(n: usize) -> Self {
        VertexPartition {
            n,
            parts: (0..n).map(|v| vec![v]).collect(),
            part_of: (0..n).collect(),
        }
    }

    pub fn whole(n: usize) -> Self {
        VertexPartition { n, parts: vec![(0..n).collect()], part_of: vec![0; n] }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn parts(&self) -> &[Vec<usize>] {
        &self.parts
    }

    pub fn part_of(&self, v: usize) -> usize {
        self.part_of[v]
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn max_part_size(&self) -> usize {
        self.parts.iter().map(|p| p.len()).max().unwrap_or(0)
    }
}
