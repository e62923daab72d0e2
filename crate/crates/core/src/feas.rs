//! Independent feasibility verifiers.
//!
//! Every solver and oracle output passes through these checks before being
//! returned; they only look at the instance, never at solver internals.

use crate::error::{Error, Result};
use crate::solvers::packing::Star;
use crate::trigraph::{EdgeKind, Trigraph};
use std::collections::BTreeSet;

pub fn check_independent_set(g: &Trigraph, set: &[usize]) -> Result<()> {
    let mut seen = BTreeSet::new();
    for &v in set {
        if v >= g.n() {
            return Err(Error::Contract(format!("vertex {v} out of range")));
        }
        if !seen.insert(v) {
            return Err(Error::Contract(format!("vertex {v} repeated")));
        }
    }
    for (i, &u) in set.iter().enumerate() {
        for &v in &set[i + 1..] {
            if g.edge(u, v) != EdgeKind::Absent {
                return Err(Error::Contract(format!("vertices {u},{v} adjacent")));
            }
        }
    }
    Ok(())
}

pub fn check_set_coloring(g: &Trigraph, demands: &[u32], palettes: &[Vec<u32>]) -> Result<()> {
    if palettes.len() != g.n() {
        return Err(Error::Contract("palette count mismatch".into()));
    }
    for (v, p) in palettes.iter().enumerate() {
        let distinct: BTreeSet<u32> = p.iter().copied().collect();
        if distinct.len() != p.len() {
            return Err(Error::Contract(format!("palette of {v} repeats a color")));
        }
        if (p.len() as u32) < demands[v] {
            return Err(Error::Contract(format!(
                "palette of {v} has {} colors, demand {}",
                p.len(),
                demands[v]
            )));
        }
    }
    for (u, v) in g.black_edges() {
        let pu: BTreeSet<u32> = palettes[u].iter().copied().collect();
        if palettes[v].iter().any(|c| pu.contains(c)) {
            return Err(Error::Contract(format!("edge {u}-{v} shares a color")));
        }
    }
    Ok(())
}

pub fn palette_size(palettes: &[Vec<u32>]) -> usize {
    palettes.iter().flatten().copied().collect::<BTreeSet<u32>>().len()
}

/// Induced matching contained in the prescribed set: pairwise vertex-disjoint
/// edges of `g`, no bridging edge, and every edge satisfying `prescribed`.
pub fn check_induced_matching(
    g: &Trigraph,
    prescribed: &dyn Fn(usize, usize) -> bool,
    edges: &[(usize, usize)],
) -> Result<()> {
    let mut used = BTreeSet::new();
    for &(u, v) in edges {
        if !g.is_black(u, v) {
            return Err(Error::Contract(format!("{u}-{v} is not an edge")));
        }
        if !prescribed(u, v) {
            return Err(Error::Contract(format!("{u}-{v} not in the prescribed set")));
        }
        for x in [u, v] {
            if !used.insert(x) {
                return Err(Error::Contract(format!("vertex {x} used twice")));
            }
        }
    }
    for (i, &(a, b)) in edges.iter().enumerate() {
        for &(c, d) in &edges[i + 1..] {
            for x in [a, b] {
                for y in [c, d] {
                    if g.edge(x, y) != EdgeKind::Absent {
                        return Err(Error::Contract(format!(
                            "bridge {x}-{y} between matching edges"
                        )));
                    }
                }
            }
        }
    }
    Ok(())
}

/// Mutually induced stars: each star's leaves are adjacent (within the
/// solution) only to its root, every edge used lies in the prescribed set,
/// and there is no edge between distinct stars.
pub fn check_star_forest(
    g: &Trigraph,
    prescribed: &dyn Fn(usize, usize) -> bool,
    stars: &[Star],
) -> Result<()> {
    let mut used = BTreeSet::new();
    for s in stars {
        if s.leaves.is_empty() {
            return Err(Error::Contract("star without leaves".into()));
        }
        for &v in std::iter::once(&s.root).chain(&s.leaves) {
            if v >= g.n() {
                return Err(Error::Contract(format!("vertex {v} out of range")));
            }
            if !used.insert(v) {
                return Err(Error::Contract(format!("vertex {v} in two stars")));
            }
        }
        for &l in &s.leaves {
            if !g.is_black(s.root, l) {
                return Err(Error::Contract(format!("{}-{l} is not an edge", s.root)));
            }
            if !prescribed(s.root, l) {
                return Err(Error::Contract(format!("edge {}-{l} not prescribed", s.root)));
            }
        }
        for (i, &a) in s.leaves.iter().enumerate() {
            for &b in &s.leaves[i + 1..] {
                if g.edge(a, b) != EdgeKind::Absent {
                    return Err(Error::Contract(format!("leaves {a},{b} adjacent")));
                }
            }
        }
    }
    for (i, s) in stars.iter().enumerate() {
        for t in &stars[i + 1..] {
            for &x in std::iter::once(&s.root).chain(&s.leaves) {
                for &y in std::iter::once(&t.root).chain(&t.leaves) {
                    if g.edge(x, y) != EdgeKind::Absent {
                        return Err(Error::Contract(format!("edge {x}-{y} between stars")));
                    }
                }
            }
        }
    }
    Ok(())
}

/// The copies must be vertex-disjoint, mutually non-adjacent, and each must
/// induce a label-preserving copy of the pattern; the tuple order must itself
/// realize the isomorphism (tuple position i maps to pattern vertex i).
pub fn check_aihp_packing(
    g: &Trigraph,
    pattern: &Trigraph,
    host_labels: &[u32],
    pattern_labels: &[u32],
    copies: &[Vec<usize>],
) -> Result<()> {
    let h = pattern.n();
    let mut used = BTreeSet::new();
    for c in copies {
        if c.len() != h {
            return Err(Error::Contract("copy size differs from pattern".into()));
        }
        for &v in c {
            if v >= g.n() || !used.insert(v) {
                return Err(Error::Contract(format!("vertex {v} reused or out of range")));
            }
        }
        if !tuple_realizes(g, pattern, host_labels, pattern_labels, c) {
            return Err(Error::Contract(format!("tuple {c:?} does not realize the pattern")));
        }
    }
    for (i, c) in copies.iter().enumerate() {
        for d in &copies[i + 1..] {
            for &x in c {
                for &y in d {
                    if g.edge(x, y) != EdgeKind::Absent {
                        return Err(Error::Contract(format!("edge {x}-{y} between copies")));
                    }
                }
            }
        }
    }
    Ok(())
}

/// Does mapping `tuple[i] -> pattern vertex i` give a label-preserving
/// induced isomorphism?
pub fn tuple_realizes(
    g: &Trigraph,
    pattern: &Trigraph,
    host_labels: &[u32],
    pattern_labels: &[u32],
    tuple: &[usize],
) -> bool {
    let h = pattern.n();
    if tuple.len() != h {
        return false;
    }
    let distinct: BTreeSet<usize> = tuple.iter().copied().collect();
    if distinct.len() != h {
        return false;
    }
    for (i, &v) in tuple.iter().enumerate() {
        if host_labels[v] != pattern_labels[i] {
            return false;
        }
    }
    for i in 0..h {
        for j in i + 1..h {
            let host_adj = g.is_black(tuple[i], tuple[j]);
            let pat_adj = pattern.is_black(i, j);
            if host_adj != pat_adj {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trigraph::Trigraph;

    #[test]
    fn independent_set_checks() {
        let g = Trigraph::from_edges(3, &[(0, 1)], &[]).unwrap();
        assert!(check_independent_set(&g, &[0, 2]).is_ok());
        assert!(check_independent_set(&g, &[0, 1]).is_err());
        assert!(check_independent_set(&g, &[0, 0]).is_err());
    }

    #[test]
    fn induced_matching_rejects_bridge() {
        // path 0-1-2-3: edges 01 and 23 are bridged by 1-2
        let g = Trigraph::from_edges(4, &[(0, 1), (1, 2), (2, 3)], &[]).unwrap();
        let all = |_: usize, _: usize| true;
        assert!(check_induced_matching(&g, &all, &[(0, 1), (2, 3)]).is_err());
        assert!(check_induced_matching(&g, &all, &[(1, 2)]).is_ok());
    }

    #[test]
    fn star_forest_checks() {
        let g = Trigraph::from_edges(5, &[(0, 1), (0, 2), (0, 3), (3, 4)], &[]).unwrap();
        let all = |_: usize, _: usize| true;
        let ok = vec![Star { root: 0, leaves: vec![1, 2] }];
        assert!(check_star_forest(&g, &all, &ok).is_ok());
        // vertex 0 of the first star is adjacent to vertex 3 of the second
        let bad = vec![
            Star { root: 0, leaves: vec![1] },
            Star { root: 4, leaves: vec![3] },
        ];
        assert!(check_star_forest(&g, &all, &bad).is_err());
    }
}
