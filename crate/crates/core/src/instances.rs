//! Instance generation with certified sequences, plus a greedy sequencing
//! heuristic for arbitrary inputs.
//!
//! Every generator returns the graph together with a contraction sequence
//! whose replay certifies the declared width; the certificate is asserted
//! before returning.

use crate::contraction::{verify_sequence, ContractionSequence, ContractionStep};
use crate::error::{Error, Result};
use crate::trigraph::{EdgeKind, Trigraph};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

/// The 7-vertex graph of the running example together with its 2-sequence
/// (e,f),(a,d),(b,ef),(ad,g),(bef,c),(adg,bcef). Vertices a..g map to 0..6.
pub fn gen_figure1() -> (Trigraph, ContractionSequence) {
    let edges = [
        (0, 1), // ab
        (0, 3), // ad
        (0, 5), // af
        (1, 2), // bc
        (1, 3), // bd
        (1, 4), // be
        (1, 5), // bf
        (2, 4), // ce
        (2, 5), // cf
        (3, 4), // de
        (3, 6), // dg
        (4, 6), // eg
        (5, 6), // fg
    ];
    let labels = ["a", "b", "c", "d", "e", "f", "g"].map(String::from).to_vec();
    let g = Trigraph::from_edges(7, &edges, &[]).unwrap().with_labels(labels).unwrap();
    let steps = vec![
        ContractionStep { u: 4, v: 5, merged: 7 },   // e, f
        ContractionStep { u: 0, v: 3, merged: 8 },   // a, d
        ContractionStep { u: 1, v: 7, merged: 9 },   // b, ef
        ContractionStep { u: 8, v: 6, merged: 10 },  // ad, g
        ContractionStep { u: 9, v: 2, merged: 11 },  // bef, c
        ContractionStep { u: 10, v: 11, merged: 12 }, // adg, bcef
    ];
    let seq = ContractionSequence::new(7, steps).unwrap();
    debug_assert_eq!(verify_sequence(&g, &seq).unwrap().width, 2);
    (g, seq)
}

enum CotreeNode {
    Leaf(usize),
    Inner { join: bool, left: Box<CotreeNode>, right: Box<CotreeNode> },
}

/// Random cograph from a random binary cotree; the returned sequence
/// contracts twins bottom-up and certifies width 0.
pub fn gen_cograph(n: usize, seed: u64) -> Result<(Trigraph, ContractionSequence)> {
    if n == 0 {
        return Err(Error::invalid("cograph generator needs n >= 1"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut next_leaf = 0usize;
    let tree = build_cotree(n, &mut rng, &mut next_leaf);

    let mut edges = Vec::new();
    collect_cotree_edges(&tree, &mut edges);
    let g = Trigraph::from_edges(n, &edges, &[])?;

    let mut steps = Vec::new();
    let mut fresh = n;
    cotree_rep(&tree, &mut steps, &mut fresh);
    let seq = ContractionSequence::new(n, steps)?;
    let width = verify_sequence(&g, &seq)?.width;
    debug_assert_eq!(width, 0);
    Ok((g, seq))
}

fn build_cotree(count: usize, rng: &mut ChaCha8Rng, next_leaf: &mut usize) -> CotreeNode {
    if count == 1 {
        let leaf = CotreeNode::Leaf(*next_leaf);
        *next_leaf += 1;
        return leaf;
    }
    let k = rng.gen_range(1..count);
    let left = build_cotree(k, rng, next_leaf);
    let right = build_cotree(count - k, rng, next_leaf);
    CotreeNode::Inner { join: rng.gen_bool(0.5), left: Box::new(left), right: Box::new(right) }
}

fn cotree_leaves(node: &CotreeNode, out: &mut Vec<usize>) {
    match node {
        CotreeNode::Leaf(v) => out.push(*v),
        CotreeNode::Inner { left, right, .. } => {
            cotree_leaves(left, out);
            cotree_leaves(right, out);
        }
    }
}

fn collect_cotree_edges(node: &CotreeNode, edges: &mut Vec<(usize, usize)>) {
    if let CotreeNode::Inner { join, left, right } = node {
        collect_cotree_edges(left, edges);
        collect_cotree_edges(right, edges);
        if *join {
            let mut ls = Vec::new();
            let mut rs = Vec::new();
            cotree_leaves(left, &mut ls);
            cotree_leaves(right, &mut rs);
            for &u in &ls {
                for &v in &rs {
                    edges.push((u, v));
                }
            }
        }
    }
}

fn cotree_rep(node: &CotreeNode, steps: &mut Vec<ContractionStep>, fresh: &mut usize) -> usize {
    match node {
        CotreeNode::Leaf(v) => *v,
        CotreeNode::Inner { left, right, .. } => {
            let l = cotree_rep(left, steps, fresh);
            let r = cotree_rep(right, steps, fresh);
            let merged = *fresh;
            *fresh += 1;
            steps.push(ContractionStep { u: l, v: r, merged });
            merged
        }
    }
}

const UNCONTRACT_RETRIES: usize = 64;

/// Reverse construction: starting from a single vertex, repeatedly split a
/// vertex, assigning the parent's relations to the two children so that the
/// recorded reverse steps replay to the parent state. Red sibling relations
/// are created and later resolved; any split pushing a red degree above `d`
/// is rejected and resampled. The replay of the returned sequence is the
/// width certificate.
pub fn gen_by_uncontraction(
    n: usize,
    d: usize,
    seed: u64,
) -> Result<(Trigraph, ContractionSequence)> {
    if n == 0 {
        return Err(Error::invalid("uncontraction generator needs n >= 1"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cap = 2 * n - 1;
    let mut adj = vec![EdgeKind::Absent; cap * cap];
    let mut alive: Vec<usize> = vec![0];
    let mut next_node = 1usize;
    // events[j] = (parent, child1, child2), in split order
    let mut events: Vec<(usize, usize, usize)> = Vec::new();

    let kind = |adj: &Vec<EdgeKind>, a: usize, b: usize| adj[a * cap + b];
    let set = |adj: &mut Vec<EdgeKind>, a: usize, b: usize, k: EdgeKind| {
        adj[a * cap + b] = k;
        adj[b * cap + a] = k;
    };

    while alive.len() < n {
        let splits_left = n - alive.len();
        let red_edges: usize = alive
            .iter()
            .enumerate()
            .map(|(i, &a)| {
                alive[i + 1..].iter().filter(|&&b| kind(&adj, a, b) == EdgeKind::Red).count()
            })
            .sum();
        let pressure = red_edges >= splits_left;

        let mut done = false;
        for attempt in 0..UNCONTRACT_RETRIES {
            let v = if pressure {
                // must shed reds: split a red-incident vertex
                let reds: Vec<usize> = alive
                    .iter()
                    .copied()
                    .filter(|&a| alive.iter().any(|&b| kind(&adj, a, b) == EdgeKind::Red))
                    .collect();
                reds[rng.gen_range(0..reds.len())]
            } else {
                alive[rng.gen_range(0..alive.len())]
            };
            let c1 = next_node;
            let c2 = next_node + 1;

            let mut assign: Vec<(usize, EdgeKind, EdgeKind)> = Vec::new();
            for &z in alive.iter().filter(|&&z| z != v) {
                let (k1, k2) = match kind(&adj, v, z) {
                    EdgeKind::Black => (EdgeKind::Black, EdgeKind::Black),
                    EdgeKind::Absent => (EdgeKind::Absent, EdgeKind::Absent),
                    EdgeKind::Red => {
                        let resolve_p = if red_edges + 2 >= splits_left { 0.95 } else { 0.5 };
                        if pressure || rng.gen_bool(resolve_p) {
                            if rng.gen_bool(0.5) {
                                (EdgeKind::Black, EdgeKind::Absent)
                            } else {
                                (EdgeKind::Absent, EdgeKind::Black)
                            }
                        } else {
                            match rng.gen_range(0..5) {
                                0 => (EdgeKind::Red, EdgeKind::Absent),
                                1 => (EdgeKind::Absent, EdgeKind::Red),
                                2 => (EdgeKind::Red, EdgeKind::Black),
                                3 => (EdgeKind::Black, EdgeKind::Red),
                                _ => (EdgeKind::Red, EdgeKind::Red),
                            }
                        }
                    }
                };
                assign.push((z, k1, k2));
            }
            let red_budget_ok = red_edges + 2 < splits_left;
            let sibling = if !pressure && red_budget_ok && d >= 1 && rng.gen_bool(0.35) {
                EdgeKind::Red
            } else if rng.gen_bool(0.5) {
                EdgeKind::Black
            } else {
                EdgeKind::Absent
            };

            // tentative apply
            for &(z, k1, k2) in &assign {
                set(&mut adj, c1, z, k1);
                set(&mut adj, c2, z, k2);
            }
            set(&mut adj, c1, c2, sibling);

            let new_alive: Vec<usize> = alive
                .iter()
                .copied()
                .filter(|&a| a != v)
                .chain([c1, c2])
                .collect();
            let max_red = new_alive
                .iter()
                .map(|&a| {
                    new_alive.iter().filter(|&&b| kind(&adj, a, b) == EdgeKind::Red).count()
                })
                .max()
                .unwrap_or(0);
            let new_reds: usize = new_alive
                .iter()
                .enumerate()
                .map(|(i, &a)| {
                    new_alive[i + 1..]
                        .iter()
                        .filter(|&&b| kind(&adj, a, b) == EdgeKind::Red)
                        .count()
                })
                .sum();
            if max_red <= d && new_reds <= splits_left - 1 {
                alive = new_alive;
                next_node += 2;
                events.push((v, c1, c2));
                done = true;
                break;
            }
            // undo tentative edges
            for &(z, _, _) in &assign {
                set(&mut adj, c1, z, EdgeKind::Absent);
                set(&mut adj, c2, z, EdgeKind::Absent);
            }
            set(&mut adj, c1, c2, EdgeKind::Absent);
            if attempt + 1 == UNCONTRACT_RETRIES {
                return Err(Error::invalid(format!(
                    "uncontraction retry budget exhausted (n={n}, d={d}, seed={seed})"
                )));
            }
        }
        debug_assert!(done);
    }

    // leaves in arena order become graph vertices 0..n
    let mut leaf_index = vec![usize::MAX; next_node];
    let mut sorted_alive = alive.clone();
    sorted_alive.sort_unstable();
    for (i, &a) in sorted_alive.iter().enumerate() {
        leaf_index[a] = i;
    }
    let mut black = Vec::new();
    for (i, &a) in sorted_alive.iter().enumerate() {
        for &b in &sorted_alive[i + 1..] {
            match kind(&adj, a, b) {
                EdgeKind::Black => black.push((leaf_index[a], leaf_index[b])),
                EdgeKind::Red => {
                    return Err(Error::invalid("internal: red edge survived generation"))
                }
                EdgeKind::Absent => {}
            }
        }
    }
    let g = Trigraph::from_edges(n, &black, &[])?;

    // forward id of the parent of event j (1-based) is 2n-1-j
    let total_events = events.len();
    let mut forward_id = leaf_index;
    for (j, &(parent, _, _)) in events.iter().enumerate() {
        forward_id[parent] = 2 * n - 2 - j; // j is 0-based here
    }
    let mut steps = Vec::new();
    for t in 0..total_events {
        let (parent, c1, c2) = events[total_events - 1 - t];
        let (u, v) = (forward_id[c1].min(forward_id[c2]), forward_id[c1].max(forward_id[c2]));
        debug_assert_eq!(forward_id[parent], n + t);
        steps.push(ContractionStep { u, v, merged: n + t });
    }
    let seq = ContractionSequence::new(n, steps)?;
    let width = verify_sequence(&g, &seq)?.width;
    if width > d {
        return Err(Error::invalid(format!(
            "internal: generated width {width} exceeds requested {d}"
        )));
    }
    Ok((g, seq))
}

/// Outcome of the greedy sequencer: the sequence is present only when its
/// replayed width is within the cap.
#[derive(Debug)]
pub struct GreedyOutcome {
    pub sequence: Option<ContractionSequence>,
    pub width: usize,
}

/// Repeatedly contract the pair minimizing the resulting max red degree
/// (ties: fewest new red edges, then lexicographic pair).
pub fn greedy_sequence(g: &Trigraph, d_cap: usize) -> Result<GreedyOutcome> {
    let n = g.n();
    if n <= 1 {
        let seq = ContractionSequence::new(n, vec![])?;
        return Ok(GreedyOutcome { sequence: Some(seq), width: 0 });
    }
    let cap = 2 * n - 1;
    let mut adj = vec![EdgeKind::Absent; cap * cap];
    for u in 0..n {
        for v in 0..n {
            adj[u * cap + v] = g.edge(u, v);
        }
    }
    let mut alive: Vec<usize> = (0..n).collect();
    let mut steps = Vec::new();
    let mut fresh = n;

    while alive.len() > 1 {
        let mut best: Option<(usize, usize, usize, usize)> = None; // (max_red, new_red, u, v)
        for (i, &u) in alive.iter().enumerate() {
            for &v in &alive[i + 1..] {
                let mut new_red = 0usize;
                let mut deg = vec![0usize; alive.len()];
                let mut w_deg = 0usize;
                for (zi, &z) in alive.iter().enumerate() {
                    if z == u || z == v {
                        continue;
                    }
                    let ku = adj[u * cap + z];
                    let kv = adj[v * cap + z];
                    let merged = match (ku, kv) {
                        (EdgeKind::Black, EdgeKind::Black) => EdgeKind::Black,
                        (EdgeKind::Absent, EdgeKind::Absent) => EdgeKind::Absent,
                        _ => EdgeKind::Red,
                    };
                    let was_red =
                        (ku == EdgeKind::Red) as usize + (kv == EdgeKind::Red) as usize;
                    if merged == EdgeKind::Red {
                        w_deg += 1;
                        if was_red == 0 {
                            new_red += 1;
                        }
                    }
                    // z's degree after the contraction
                    let mut dz = 0usize;
                    for &y in alive.iter() {
                        if y == z || y == u || y == v {
                            continue;
                        }
                        if adj[z * cap + y] == EdgeKind::Red {
                            dz += 1;
                        }
                    }
                    if merged == EdgeKind::Red {
                        dz += 1;
                    }
                    deg[zi] = dz;
                }
                let max_red = deg.iter().copied().max().unwrap_or(0).max(w_deg);
                let cand = (max_red, new_red, u, v);
                if best.map_or(true, |b| cand < b) {
                    best = Some(cand);
                }
            }
        }
        let (_, _, u, v) = best.unwrap();
        // apply
        let w = fresh;
        fresh += 1;
        for &z in alive.iter() {
            if z == u || z == v {
                continue;
            }
            let ku = adj[u * cap + z];
            let kv = adj[v * cap + z];
            let merged = match (ku, kv) {
                (EdgeKind::Black, EdgeKind::Black) => EdgeKind::Black,
                (EdgeKind::Absent, EdgeKind::Absent) => EdgeKind::Absent,
                _ => EdgeKind::Red,
            };
            adj[w * cap + z] = merged;
            adj[z * cap + w] = merged;
        }
        alive.retain(|&z| z != u && z != v);
        alive.push(w);
        steps.push(ContractionStep { u, v, merged: w });
    }

    let seq = ContractionSequence::new(n, steps)?;
    let width = verify_sequence(g, &seq)?.width;
    Ok(GreedyOutcome { sequence: (width <= d_cap).then_some(seq), width })
}
