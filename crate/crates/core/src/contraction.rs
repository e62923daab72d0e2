//! Contraction sequences: applying single contractions, replaying and
//! verifying d-sequences, and extracting the partition view at any prefix.
//!
//! Vertex ids follow the sequence file format: the starting (tri)graph uses
//! `0..n`, fresh ids start at `n` and are handed out in step order, so steps
//! parse order-independently.

use crate::error::{Error, Result};
use crate::trigraph::{EdgeKind, Trigraph, VertexPartition};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ContractionStep {
    pub u: usize,
    pub v: usize,
    pub merged: usize,
}

/// Ordered list of contractions over an evolving vertex universe.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContractionSequence {
    origin_n: usize,
    steps: Vec<ContractionStep>,
}

impl ContractionSequence {
    pub fn new(origin_n: usize, steps: Vec<ContractionStep>) -> Result<Self> {
        if steps.len() + 1 > origin_n.max(1) {
            return Err(Error::invalid(format!(
                "sequence of {} steps too long for n = {origin_n}",
                steps.len()
            )));
        }
        let mut live = vec![true; origin_n + steps.len()];
        for (i, s) in steps.iter().enumerate() {
            let fresh = origin_n + i;
            if s.merged != fresh {
                return Err(Error::invalid(format!(
                    "step {i}: merged id {} is not the next fresh id {fresh}",
                    s.merged
                )));
            }
            if s.u == s.v || s.u >= fresh || s.v >= fresh || !live[s.u] || !live[s.v] {
                return Err(Error::invalid(format!(
                    "step {i}: contracting {} and {} is not possible here",
                    s.u, s.v
                )));
            }
            live[s.u] = false;
            live[s.v] = false;
        }
        Ok(ContractionSequence { origin_n, steps })
    }

    pub fn origin_n(&self) -> usize {
        self.origin_n
    }

    pub fn steps(&self) -> &[ContractionStep] {
        &self.steps
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// A full sequence contracts down to a single vertex.
    pub fn is_full(&self) -> bool {
        self.origin_n <= 1 || self.steps.len() == self.origin_n - 1
    }

    pub fn prefix(&self, t: usize) -> ContractionSequence {
        ContractionSequence { origin_n: self.origin_n, steps: self.steps[..t].to_vec() }
    }
}

/// Per-step red-degree profile of a replayed sequence.
///
/// `per_step[k]` is the maximum red degree of the trigraph after `k`
/// contractions; index 0 reports the starting trigraph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WidthReport {
    pub per_step: Vec<usize>,
    pub width: usize,
    pub argmax_step: usize,
}

/// Replay engine over an evolving vertex universe.
///
/// Adjacency is kept in a fixed `(2n-1)^2` table indexed by vertex id, so a
/// contraction is O(live) and ids never shift.
pub(crate) struct Replay {
    origin_n: usize,
    cap: usize,
    adj: Vec<EdgeKind>,
    live: Vec<bool>,
    red_deg: Vec<usize>,
    groups: Vec<Vec<usize>>,
    labels: Option<Vec<String>>,
    next_fresh: usize,
}

impl Replay {
    pub fn new(g: &Trigraph) -> Replay {
        let n = g.n();
        let cap = if n == 0 { 0 } else { 2 * n - 1 };
        let mut adj = vec![EdgeKind::Absent; cap * cap];
        let mut red_deg = vec![0; cap];
        for u in 0..n {
            for v in 0..n {
                adj[u * cap + v] = g.edge(u, v);
            }
            red_deg[u] = g.red_degree(u);
        }
        let mut groups: Vec<Vec<usize>> = (0..n).map(|v| vec![v]).collect();
        groups.resize(cap, Vec::new());
        Replay {
            origin_n: n,
            cap,
            adj,
            live: (0..cap).map(|i| i < n).collect(),
            red_deg,
            groups,
            labels: g.labels().map(|l| {
                let mut ls = l.to_vec();
                ls.resize(cap, String::new());
                ls
            }),
            next_fresh: n,
        }
    }

    pub fn live_ids(&self) -> Vec<usize> {
        (0..self.cap).filter(|&i| self.live[i]).collect()
    }

    pub fn max_red_degree(&self) -> usize {
        (0..self.cap).filter(|&i| self.live[i]).map(|i| self.red_deg[i]).max().unwrap_or(0)
    }

    fn kind(&self, a: usize, b: usize) -> EdgeKind {
        self.adj[a * self.cap + b]
    }

    fn set_kind(&mut self, a: usize, b: usize, k: EdgeKind) {
        self.adj[a * self.cap + b] = k;
        self.adj[b * self.cap + a] = k;
    }

    pub fn contract(&mut self, u: usize, v: usize) -> Result<usize> {
        if u == v {
            return Err(Error::invalid(format!("cannot contract {u} with itself")));
        }
        for x in [u, v] {
            if x >= self.cap || !self.live[x] {
                return Err(Error::invalid(format!("vertex {x} is dead or unknown")));
            }
        }
        let w = self.next_fresh;
        self.next_fresh += 1;
        self.live[u] = false;
        self.live[v] = false;
        self.live[w] = true;
        for z in 0..self.cap {
            if !self.live[z] || z == w {
                continue;
            }
            let ku = self.kind(u, z);
            let kv = self.kind(v, z);
            let merged = match (ku, kv) {
                (EdgeKind::Black, EdgeKind::Black) => EdgeKind::Black,
                (EdgeKind::Absent, EdgeKind::Absent) => EdgeKind::Absent,
                _ => EdgeKind::Red,
            };
            // red-degree bookkeeping for z: remove contributions of u, v, add w
            let before = (ku == EdgeKind::Red) as usize + (kv == EdgeKind::Red) as usize;
            let after = (merged == EdgeKind::Red) as usize;
            self.red_deg[z] -= before;
            self.red_deg[z] += after;
            if after == 1 {
                self.red_deg[w] += 1;
            }
            self.set_kind(w, z, merged);
        }
        let mut group = std::mem::take(&mut self.groups[u]);
        group.extend(std::mem::take(&mut self.groups[v]));
        group.sort_unstable();
        if let Some(labels) = &mut self.labels {
            let mut pieces: Vec<&str> = Vec::new();
            if u < v {
                pieces.push(&labels[u]);
                pieces.push(&labels[v]);
            } else {
                pieces.push(&labels[v]);
                pieces.push(&labels[u]);
            }
            labels[w] = pieces.concat();
        }
        self.groups[w] = group;
        Ok(w)
    }

    /// Current trigraph over live ids in ascending order, plus the id list.
    pub fn current_trigraph(&self) -> (Trigraph, Vec<usize>) {
        let ids = self.live_ids();
        let mut black = Vec::new();
        let mut red = Vec::new();
        for (a, &i) in ids.iter().enumerate() {
            for (b, &j) in ids.iter().enumerate().skip(a + 1) {
                match self.kind(i, j) {
                    EdgeKind::Black => black.push((a, b)),
                    EdgeKind::Red => red.push((a, b)),
                    EdgeKind::Absent => {}
                }
            }
        }
        let mut g = Trigraph::from_edges(ids.len(), &black, &red).unwrap();
        if let Some(labels) = &self.labels {
            g = g.with_labels(ids.iter().map(|&i| labels[i].clone()).collect()).unwrap();
        }
        (g, ids)
    }

    /// Partition of the original vertex set given by the live groups,
    /// ordered by live id.
    pub fn current_partition(&self) -> VertexPartition {
        let parts: Vec<Vec<usize>> =
            self.live_ids().into_iter().map(|i| self.groups[i].clone()).collect();
        VertexPartition::new(self.origin_n, parts).expect("replay groups partition the vertex set")
    }
}

/// Contract `u` and `v` in `g`. The merged vertex is appended last; the
/// returned map sends each old vertex to its new index (`None` for `u`, `v`
/// themselves, which map to the last vertex).
pub fn apply_contraction(g: &Trigraph, u: usize, v: usize) -> Result<(Trigraph, Vec<usize>)> {
    let mut replay = Replay::new(g);
    replay.contract(u, v)?;
    let (out, ids) = replay.current_trigraph();
    let mut map = vec![out.n().saturating_sub(1); g.n()];
    for (new_idx, &id) in ids.iter().enumerate() {
        if id < g.n() {
            map[id] = new_idx;
        }
    }
    Ok((out, map))
}

/// Replay `seq` over `g` and report the red-degree profile.
pub fn verify_sequence(g: &Trigraph, seq: &ContractionSequence) -> Result<WidthReport> {
    if seq.origin_n() != g.n() {
        return Err(Error::invalid(format!(
            "sequence origin n = {} does not match graph n = {}",
            seq.origin_n(),
            g.n()
        )));
    }
    let mut replay = Replay::new(g);
    let mut per_step = vec![replay.max_red_degree()];
    for (i, s) in seq.steps().iter().enumerate() {
        replay
            .contract(s.u, s.v)
            .map_err(|e| Error::invalid(format!("step {i} ({}+{}): {e}", s.u, s.v)))?;
        per_step.push(replay.max_red_degree());
    }
    let (argmax_step, &width) =
        per_step.iter().enumerate().max_by_key(|&(i, &w)| (w, std::cmp::Reverse(i))).unwrap();
    Ok(WidthReport { per_step, width, argmax_step })
}

/// Partition of `V(g)` into the `i` live groups after `n - i` contractions.
pub fn partition_at(g: &Trigraph, seq: &ContractionSequence, i: usize) -> Result<VertexPartition> {
    let n = g.n();
    if i == 0 || i > n {
        return Err(Error::invalid(format!("part count {i} out of range for n = {n}")));
    }
    let t = n - i;
    if t > seq.len() {
        return Err(Error::invalid(format!(
            "sequence has {} steps, {t} needed for {i} parts",
            seq.len()
        )));
    }
    let mut replay = Replay::new(g);
    for s in &seq.steps()[..t] {
        replay.contract(s.u, s.v)?;
    }
    Ok(replay.current_partition())
}

/// Trigraph after the first `n - i` contractions (the `G_i` of the sequence),
/// with vertices ordered by live id.
pub fn trigraph_at(g: &Trigraph, seq: &ContractionSequence, i: usize) -> Result<Trigraph> {
    let n = g.n();
    if i == 0 || i > n {
        return Err(Error::invalid(format!("size {i} out of range for n = {n}")));
    }
    let t = n - i;
    if t > seq.len() {
        return Err(Error::invalid("sequence too short"));
    }
    let mut replay = Replay::new(g);
    for s in &seq.steps()[..t] {
        replay.contract(s.u, s.v)?;
    }
    Ok(replay.current_trigraph().0)
}
