//! Budgeted brute-force exact solvers, used as recursion base cases and as
//! ground truth in tests.
//!
//! Budgets fail loudly; there is no anytime behavior, so a returned value is
//! always the true optimum. Enumeration orders are fixed so identical inputs
//! yield identical solutions, not just identical values.

use crate::error::{Error, Result};
use crate::feas;
use crate::solvers::packing::Star;
use crate::trigraph::{EdgeKind, Trigraph};
use crate::{q, Q};
use std::collections::{BTreeMap, BTreeSet};
use std::time::Instant;

/// Node and wall-time limits for one oracle call.
#[derive(Debug, Clone, Copy)]
pub struct OracleBudget {
    pub node_limit: u64,
    pub wall_ms: Option<u64>,
}

impl Default for OracleBudget {
    fn default() -> Self {
        let wall_ms = std::env::var("TWW_BUDGET_MS").ok().and_then(|v| v.parse().ok());
        OracleBudget { node_limit: 50_000_000, wall_ms }
    }
}

/// Hard input-size caps. Defaults are the documented desk-scale values;
/// callers with verified headroom may raise them.
#[derive(Debug, Clone, Copy)]
pub struct OracleCaps {
    pub mis_n: usize,
    pub setcol_n: usize,
    pub setcol_b: u32,
    pub msim_n: usize,
    pub msim_y: usize,
    pub mlisf_n: usize,
    pub aihp_n: usize,
    pub aihp_h: usize,
}

impl Default for OracleCaps {
    fn default() -> Self {
        OracleCaps {
            mis_n: 32,
            setcol_n: 14,
            setcol_b: 4,
            msim_n: 22,
            msim_y: 26,
            mlisf_n: 18,
            aihp_n: 16,
            aihp_h: 4,
        }
    }
}

impl OracleCaps {
    /// Caps wide enough for the acceptance corpus (n up to 24); the
    /// subset-enumeration backends switch to branch and bound where needed.
    pub fn relaxed() -> Self {
        OracleCaps {
            mis_n: 32,
            setcol_n: 26,
            setcol_b: 32,
            msim_n: 26,
            msim_y: 128,
            mlisf_n: 26,
            aihp_n: 20,
            aihp_h: 4,
        }
    }
}

struct Meter {
    nodes: u64,
    limit: u64,
    start: Instant,
    wall_ms: Option<u64>,
    op: &'static str,
}

impl Meter {
    fn new(op: &'static str, budget: &OracleBudget) -> Meter {
        Meter { nodes: 0, limit: budget.node_limit, start: Instant::now(), wall_ms: budget.wall_ms, op }
    }

    fn tick(&mut self) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.limit {
            return Err(Error::BudgetExceeded {
                op: self.op,
                detail: format!("node limit {} reached", self.limit),
            });
        }
        if let Some(ms) = self.wall_ms {
            if self.nodes % 4096 == 0 && self.start.elapsed().as_millis() as u64 > ms {
                return Err(Error::BudgetExceeded {
                    op: self.op,
                    detail: format!("wall limit {ms} ms reached"),
                });
            }
        }
        Ok(())
    }
}

fn cap_err(op: &'static str, detail: String) -> Error {
    Error::BudgetExceeded { op, detail }
}

/// Optimal weighted independent set by branch and bound on a max-degree
/// vertex; deterministic lexicographic tie-break on equal-value solutions.
pub fn exact_mis(
    g: &Trigraph,
    weights: &[Q],
    budget: &OracleBudget,
    caps: &OracleCaps,
) -> Result<(Vec<usize>, Q)> {
    if g.n() > caps.mis_n {
        return Err(cap_err("exact_mis", format!("n = {} exceeds cap {}", g.n(), caps.mis_n)));
    }
    if !g.is_graph() {
        return Err(Error::invalid("exact_mis expects a graph (no red edges)"));
    }
    let mut meter = Meter::new("exact_mis", budget);
    let mut best: (Vec<usize>, Q) = (Vec::new(), q(0));
    let mut chosen = Vec::new();
    let alive: Vec<usize> = (0..g.n()).collect();
    mis_branch(g, weights, alive, &mut chosen, q(0), &mut best, &mut meter)?;
    best.0.sort_unstable();
    feas::check_independent_set(g, &best.0)?;
    Ok(best)
}

fn mis_branch(
    g: &Trigraph,
    w: &[Q],
    alive: Vec<usize>,
    chosen: &mut Vec<usize>,
    value: Q,
    best: &mut (Vec<usize>, Q),
    meter: &mut Meter,
) -> Result<()> {
    meter.tick()?;
    let optimistic: Q = value + alive.iter().map(|&v| w[v].max(q(0))).sum::<Q>();
    if optimistic < best.1 {
        return Ok(());
    }
    let improves = value > best.1 || {
        value == best.1 && {
            let mut c = chosen.clone();
            c.sort_unstable();
            let mut b = best.0.clone();
            b.sort_unstable();
            c < b
        }
    };
    if improves {
        *best = (chosen.clone(), value);
    }
    if alive.is_empty() {
        return Ok(());
    }
    // branch on a max-degree vertex within the residual graph (tie: smallest)
    let deg = |v: usize| alive.iter().filter(|&&z| g.edge(v, z) != EdgeKind::Absent).count();
    let &v = alive.iter().max_by_key(|&&v| (deg(v), std::cmp::Reverse(v))).unwrap();
    // include v
    let reduced: Vec<usize> = alive
        .iter()
        .copied()
        .filter(|&z| z != v && g.edge(v, z) == EdgeKind::Absent)
        .collect();
    chosen.push(v);
    mis_branch(g, w, reduced, chosen, value + w[v], best, meter)?;
    chosen.pop();
    // exclude v
    let rest: Vec<usize> = alive.iter().copied().filter(|&z| z != v).collect();
    mis_branch(g, w, rest, chosen, value, best, meter)
}

/// Minimum-total-color set coloring by branch and bound over canonical color
/// assignments: vertices are processed in descending-degree order, the first
/// vertex gets colors `1..=b(v1)`, and new colors are introduced in order.
pub fn exact_set_coloring(
    g: &Trigraph,
    demands: &[u32],
    budget: &OracleBudget,
    caps: &OracleCaps,
) -> Result<(Vec<Vec<u32>>, u32)> {
    let n = g.n();
    if n > caps.setcol_n {
        return Err(cap_err("exact_set_coloring", format!("n = {n} exceeds cap {}", caps.setcol_n)));
    }
    if let Some(&b) = demands.iter().max() {
        if b > caps.setcol_b {
            return Err(cap_err("exact_set_coloring", format!("demand {b} exceeds cap {}", caps.setcol_b)));
        }
    }
    if !g.is_graph() {
        return Err(Error::invalid("exact_set_coloring expects a graph"));
    }
    if n == 0 {
        return Ok((Vec::new(), 0));
    }
    if demands.iter().any(|&b| b == 0) {
        return Err(Error::invalid("demands must be positive"));
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| (std::cmp::Reverse(g.degree(v)), v));

    // greedy upper bound in the same order
    let mut greedy: Vec<Vec<u32>> = vec![Vec::new(); n];
    let mut used = 0u32;
    for &v in &order {
        let mut taken: BTreeSet<u32> = BTreeSet::new();
        for (z, _) in g.neighbors(v) {
            taken.extend(greedy[z].iter().copied());
        }
        let mut palette = Vec::new();
        let mut c = 1u32;
        while palette.len() < demands[v] as usize {
            if !taken.contains(&c) {
                palette.push(c);
            }
            c += 1;
        }
        used = used.max(*palette.last().unwrap());
        greedy[v] = palette;
    }

    let mut meter = Meter::new("exact_set_coloring", budget);
    let mut best: (Vec<Vec<u32>>, u32) = (greedy, used);
    let mut palettes: Vec<Vec<u32>> = vec![Vec::new(); n];
    setcol_branch(g, demands, &order, 0, 0, &mut palettes, &mut best, &mut meter)?;
    feas::check_set_coloring(g, demands, &best.0)?;
    Ok(best)
}

fn setcol_branch(
    g: &Trigraph,
    demands: &[u32],
    order: &[usize],
    pos: usize,
    used: u32,
    palettes: &mut Vec<Vec<u32>>,
    best: &mut (Vec<Vec<u32>>, u32),
    meter: &mut Meter,
) -> Result<()> {
    meter.tick()?;
    if used >= best.1 && pos < order.len() {
        return Ok(());
    }
    if pos == order.len() {
        if used < best.1 {
            *best = (palettes.clone(), used);
        }
        return Ok(());
    }
    let v = order[pos];
    let b = demands[v] as usize;
    let mut taken: BTreeSet<u32> = BTreeSet::new();
    for (z, _) in g.neighbors(v) {
        taken.extend(palettes[z].iter().copied());
    }
    let avail: Vec<u32> = (1..=used).filter(|c| !taken.contains(c)).collect();
    // choose j old colors (lexicographic subsets) and b - j fresh ones
    for j in (0..=b.min(avail.len())).rev() {
        let fresh = (b - j) as u32;
        if used + fresh >= best.1 {
            continue;
        }
        let mut idx: Vec<usize> = (0..j).collect();
        loop {
            let mut palette: Vec<u32> = idx.iter().map(|&i| avail[i]).collect();
            for f in 1..=fresh {
                palette.push(used + f);
            }
            palettes[v] = palette;
            setcol_branch(g, demands, order, pos + 1, used + fresh, palettes, best, meter)?;
            palettes[v].clear();
            if !next_combination(&mut idx, avail.len()) {
                break;
            }
        }
    }
    Ok(())
}

/// Advance `idx` to the next lexicographic combination of `0..n`; false when
/// exhausted. An empty `idx` has a single (empty) combination.
fn next_combination(idx: &mut [usize], n: usize) -> bool {
    let j = idx.len();
    let mut i = j;
    while i > 0 {
        i -= 1;
        if idx[i] != i + n - j {
            idx[i] += 1;
            for k in i + 1..j {
                idx[k] = idx[k - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Optimal subset induced matching by include/exclude search over the
/// prescribed edges in lexicographic order.
pub fn exact_msim(
    g: &Trigraph,
    edge_weights: &dyn Fn(usize, usize) -> Q,
    prescribed: &dyn Fn(usize, usize) -> bool,
    budget: &OracleBudget,
    caps: &OracleCaps,
) -> Result<(Vec<(usize, usize)>, Q)> {
    if !g.is_graph() {
        return Err(Error::invalid("exact_msim expects a graph"));
    }
    let y: Vec<(usize, usize)> = g.black_edges().filter(|&(u, v)| prescribed(u, v)).collect();
    if g.n() > caps.msim_n && y.len() > caps.msim_y {
        return Err(cap_err(
            "exact_msim",
            format!("n = {} and |Y| = {} exceed caps ({}, {})", g.n(), y.len(), caps.msim_n, caps.msim_y),
        ));
    }
    let m = y.len();
    // conflict[i][j]: edges share a vertex or are bridged
    let mut conflict = vec![false; m * m];
    for i in 0..m {
        for j in i + 1..m {
            let (a, b) = (y[i], y[j]);
            let touch = a.0 == b.0 || a.0 == b.1 || a.1 == b.0 || a.1 == b.1;
            let bridged = [a.0, a.1]
                .iter()
                .any(|&x| [b.0, b.1].iter().any(|&z| g.edge(x, z) != EdgeKind::Absent));
            if touch || bridged {
                conflict[i * m + j] = true;
                conflict[j * m + i] = true;
            }
        }
    }
    let w: Vec<Q> = y.iter().map(|&(u, v)| edge_weights(u, v)).collect();
    let mut meter = Meter::new("exact_msim", budget);
    let mut best: (Vec<usize>, Q) = (Vec::new(), q(0));
    let mut chosen: Vec<usize> = Vec::new();
    msim_branch(&conflict, &w, m, 0, &mut chosen, q(0), &mut best, &mut meter)?;
    let edges: Vec<(usize, usize)> = best.0.iter().map(|&i| y[i]).collect();
    feas::check_induced_matching(g, prescribed, &edges)?;
    Ok((edges, best.1))
}

fn msim_branch(
    conflict: &[bool],
    w: &[Q],
    m: usize,
    pos: usize,
    chosen: &mut Vec<usize>,
    value: Q,
    best: &mut (Vec<usize>, Q),
    meter: &mut Meter,
) -> Result<()> {
    meter.tick()?;
    if value > best.1 {
        *best = (chosen.clone(), value);
    }
    if pos == m {
        return Ok(());
    }
    let optimistic: Q = value + (pos..m).map(|i| w[i].max(q(0))).sum::<Q>();
    if optimistic <= best.1 {
        return Ok(());
    }
    // include pos when compatible
    if chosen.iter().all(|&i| !conflict[i * m + pos]) {
        chosen.push(pos);
        msim_branch(conflict, w, m, pos + 1, chosen, value + w[pos], best, meter)?;
        chosen.pop();
    }
    msim_branch(conflict, w, m, pos + 1, chosen, value, best, meter)
}

/// Star decomposition of `G[s]`: every component must be a star with at
/// least one edge, all edges prescribed. Returns the stars and the total
/// leaf weight, or None when `s` does not decompose.
pub(crate) fn star_decomposition(
    g: &Trigraph,
    weights: &[Q],
    prescribed: &dyn Fn(usize, usize) -> bool,
    s: &[usize],
) -> Option<(Vec<Star>, Q)> {
    let comps = crate::coloring_util::components_within(g, s);
    let mut stars = Vec::new();
    let mut total = q(0);
    for comp in comps {
        if comp.len() < 2 {
            return None;
        }
        let degrees: Vec<usize> = comp
            .iter()
            .map(|&v| comp.iter().filter(|&&z| g.is_black(v, z)).count())
            .collect();
        let edge_count: usize = degrees.iter().sum::<usize>() / 2;
        if edge_count != comp.len() - 1 {
            return None;
        }
        // candidate centers have full degree
        let centers: Vec<usize> = comp
            .iter()
            .zip(&degrees)
            .filter(|&(_, &d)| d == comp.len() - 1)
            .map(|(&v, _)| v)
            .collect();
        if centers.is_empty() {
            return None;
        }
        // choose the root minimizing lost weight (leaves are the rest)
        let mut best_star: Option<(Star, Q)> = None;
        for &root in &centers {
            let leaves: Vec<usize> = comp.iter().copied().filter(|&v| v != root).collect();
            if leaves.iter().any(|&l| !prescribed(root, l)) {
                continue;
            }
            let value: Q = leaves.iter().map(|&l| weights[l]).sum();
            if best_star.as_ref().map_or(true, |(_, bv)| value > *bv) {
                best_star = Some((Star { root, leaves }, value));
            }
        }
        let (star, value) = best_star?;
        total = total + value;
        stars.push(star);
    }
    Some((stars, total))
}

/// Optimal induced star forest. Subset enumeration for n <= 18 (the
/// documented algorithm), branch and bound over vertex roles above that.
pub fn exact_mlisf(
    g: &Trigraph,
    weights: &[Q],
    prescribed: &dyn Fn(usize, usize) -> bool,
    budget: &OracleBudget,
    caps: &OracleCaps,
) -> Result<(Vec<Star>, Q)> {
    let n = g.n();
    if n > caps.mlisf_n {
        return Err(cap_err("exact_mlisf", format!("n = {n} exceeds cap {}", caps.mlisf_n)));
    }
    if !g.is_graph() {
        return Err(Error::invalid("exact_mlisf expects a graph"));
    }
    let result = if n <= 18 {
        mlisf_enumerate(g, weights, prescribed, budget)?
    } else {
        mlisf_bb(g, weights, prescribed, budget)?
    };
    feas::check_star_forest(g, prescribed, &result.0)?;
    Ok(result)
}

fn mlisf_enumerate(
    g: &Trigraph,
    weights: &[Q],
    prescribed: &dyn Fn(usize, usize) -> bool,
    budget: &OracleBudget,
) -> Result<(Vec<Star>, Q)> {
    let n = g.n();
    let mut meter = Meter::new("exact_mlisf", budget);
    let mut best: (Vec<Star>, Q) = (Vec::new(), q(0));
    for mask in 0u64..(1u64 << n) {
        meter.tick()?;
        let s: Vec<usize> = (0..n).filter(|&v| mask >> v & 1 == 1).collect();
        if let Some((stars, value)) = star_decomposition(g, weights, prescribed, &s) {
            if value > best.1 {
                best = (stars, value);
            }
        }
    }
    Ok(best)
}

#[derive(Clone, Copy, PartialEq)]
enum Role {
    Out,
    Center,
    Leaf,
}

/// Branch over vertex roles in BFS order. The constraints are purely
/// pairwise (an edge of the chosen set must join a center and a leaf, every
/// leaf has exactly one chosen neighbor, leaf edges lie in the prescribed
/// set). A closure rule prunes pending roles eagerly: once a vertex's last
/// potential partner is decided, a leaf must hold exactly one chosen
/// neighbor and a center at least one.
struct MlisfBb<'a> {
    w: &'a [Q],
    /// adjacency in branch positions, with prescribed-edge flags
    adj: Vec<Vec<(usize, bool)>>,
    last_nbr: Vec<Option<usize>>,
    roles: Vec<Role>,
    nbrs: Vec<usize>,
    best: (Vec<Role>, Q),
}

fn mlisf_bb(
    g: &Trigraph,
    weights: &[Q],
    prescribed: &dyn Fn(usize, usize) -> bool,
    budget: &OracleBudget,
) -> Result<(Vec<Star>, Q)> {
    let n = g.n();
    let mut meter = Meter::new("exact_mlisf", budget);
    // BFS order keeps neighbors close in the branch sequence
    let mut order = Vec::with_capacity(n);
    let mut seen = vec![false; n];
    for root in 0..n {
        if seen[root] {
            continue;
        }
        let mut queue = std::collections::VecDeque::from([root]);
        seen[root] = true;
        while let Some(v) = queue.pop_front() {
            order.push(v);
            for (z, _) in g.neighbors(v) {
                if !seen[z] {
                    seen[z] = true;
                    queue.push_back(z);
                }
            }
        }
    }
    let pos_of = {
        let mut p = vec![0usize; n];
        for (i, &v) in order.iter().enumerate() {
            p[v] = i;
        }
        p
    };
    let adj: Vec<Vec<(usize, bool)>> = order
        .iter()
        .map(|&v| {
            let mut row: Vec<(usize, bool)> =
                g.neighbors(v).map(|(z, _)| (pos_of[z], prescribed(v, z))).collect();
            row.sort_unstable();
            row
        })
        .collect();
    let last_nbr: Vec<Option<usize>> =
        adj.iter().map(|row| row.last().map(|&(p, _)| p)).collect();
    let weights_pos: Vec<Q> = order.iter().map(|&v| weights[v]).collect();

    let mut state = MlisfBb {
        w: &weights_pos,
        adj,
        last_nbr,
        roles: vec![Role::Out; n],
        nbrs: vec![0; n],
        best: (vec![Role::Out; n], q(0)),
    };
    mlisf_bb_branch(&mut state, 0, q(0), &mut meter)?;

    // materialize stars: each leaf's unique chosen neighbor is its center
    let roles = state.best.0;
    let mut stars: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for p in 0..n {
        if roles[p] == Role::Leaf {
            let center = state.adj[p]
                .iter()
                .map(|&(z, _)| z)
                .find(|&z| roles[z] == Role::Center)
                .expect("leaf lost its center");
            stars.entry(order[center]).or_default().push(order[p]);
        }
    }
    let stars: Vec<Star> = stars
        .into_iter()
        .map(|(root, mut leaves)| {
            leaves.sort_unstable();
            Star { root, leaves }
        })
        .collect();
    Ok((stars, state.best.1))
}

fn mlisf_bb_branch(st: &mut MlisfBb<'_>, p: usize, value: Q, meter: &mut Meter) -> Result<()> {
    meter.tick()?;
    let n = st.roles.len();
    if p == n {
        let complete = (0..n).all(|z| match st.roles[z] {
            Role::Leaf => st.nbrs[z] == 1,
            Role::Center => st.nbrs[z] >= 1,
            Role::Out => true,
        });
        if complete && value > st.best.1 {
            st.best = (st.roles.clone(), value);
        }
        return Ok(());
    }
    let optimistic: Q = value + (p..n).map(|z| st.w[z].max(q(0))).sum::<Q>();
    if optimistic <= st.best.1 {
        return Ok(());
    }

    'role: for role in [Role::Leaf, Role::Center, Role::Out] {
        let mut touched = Vec::new();
        let mut my_nbrs = 0usize;
        if role != Role::Out {
            for &(z, in_y) in st.adj[p].iter().take_while(|&&(z, _)| z < p) {
                if st.roles[z] == Role::Out {
                    continue;
                }
                let pair_ok = matches!(
                    (role, st.roles[z]),
                    (Role::Leaf, Role::Center) | (Role::Center, Role::Leaf)
                ) && in_y;
                if !pair_ok
                    || (st.roles[z] == Role::Leaf && st.nbrs[z] >= 1)
                    || (role == Role::Leaf && my_nbrs >= 1)
                {
                    continue 'role;
                }
                my_nbrs += 1;
                touched.push(z);
            }
            // pending roles need a future partner
            let has_future = st.last_nbr[p].is_some_and(|l| l > p);
            if my_nbrs == 0 && !has_future {
                continue 'role;
            }
        }
        st.roles[p] = role;
        st.nbrs[p] = my_nbrs;
        for &z in &touched {
            st.nbrs[z] += 1;
        }
        // closure rule: earlier neighbors whose last potential partner is p
        // must be satisfied now
        let closed_ok = st.adj[p]
            .iter()
            .take_while(|&&(z, _)| z < p)
            .all(|&(z, _)| {
                if st.last_nbr[z] != Some(p) {
                    return true;
                }
                match st.roles[z] {
                    Role::Leaf => st.nbrs[z] == 1,
                    Role::Center => st.nbrs[z] >= 1,
                    Role::Out => true,
                }
            });
        if closed_ok {
            let gained = if role == Role::Leaf { st.w[p] } else { q(0) };
            mlisf_bb_branch(st, p + 1, value + gained, meter)?;
        }
        for &z in &touched {
            st.nbrs[z] -= 1;
        }
        st.nbrs[p] = 0;
        st.roles[p] = Role::Out;
    }
    Ok(())
}

/// Optimal labeled tuple-weighted independent H-packing by vertex-subset
/// enumeration plus a decomposition check.
pub fn exact_aihp(
    g: &Trigraph,
    pattern: &Trigraph,
    host_labels: &[u32],
    pattern_labels: &[u32],
    tuple_weight: &dyn Fn(&[usize]) -> Q,
    budget: &OracleBudget,
    caps: &OracleCaps,
) -> Result<(Vec<Vec<usize>>, Q)> {
    let n = g.n();
    let h = pattern.n();
    if n > caps.aihp_n {
        return Err(cap_err("exact_aihp", format!("n = {n} exceeds cap {}", caps.aihp_n)));
    }
    if h > caps.aihp_h {
        return Err(cap_err("exact_aihp", format!("pattern size {h} exceeds cap {}", caps.aihp_h)));
    }
    if h == 0 {
        return Err(Error::invalid("empty pattern"));
    }
    let mut meter = Meter::new("exact_aihp", budget);
    let mut best: (Vec<Vec<usize>>, Q) = (Vec::new(), q(0));
    for mask in 0u64..(1u64 << n) {
        meter.tick()?;
        let s: Vec<usize> = (0..n).filter(|&v| mask >> v & 1 == 1).collect();
        if s.len() % h != 0 {
            continue;
        }
        if let Some((copies, value)) =
            packing_decomposition(g, pattern, host_labels, pattern_labels, tuple_weight, &s)
        {
            if value > best.1 {
                best = (copies, value);
            }
        }
    }
    feas::check_aihp_packing(g, pattern, host_labels, pattern_labels, &best.0)?;
    Ok(best)
}

/// Decompose `G[s]` into pattern copies; each component must realize the
/// pattern under some label-preserving ordering. The copy value is the best
/// tuple weight over realizing orderings.
pub(crate) fn packing_decomposition(
    g: &Trigraph,
    pattern: &Trigraph,
    host_labels: &[u32],
    pattern_labels: &[u32],
    tuple_weight: &dyn Fn(&[usize]) -> Q,
    s: &[usize],
) -> Option<(Vec<Vec<usize>>, Q)> {
    let h = pattern.n();
    let comps = crate::coloring_util::components_within(g, s);
    let mut copies = Vec::new();
    let mut total = q(0);
    for comp in comps {
        if comp.len() != h {
            return None;
        }
        let mut best: Option<(Vec<usize>, Q)> = None;
        permutations(&comp, &mut |tuple| {
            if feas::tuple_realizes(g, pattern, host_labels, pattern_labels, tuple) {
                let w = tuple_weight(tuple);
                if best.as_ref().map_or(true, |(_, bw)| w > *bw) {
                    best = Some((tuple.to_vec(), w));
                }
            }
        });
        let (tuple, w) = best?;
        total = total + w;
        copies.push(tuple);
    }
    Some((copies, total))
}

fn permutations(items: &[usize], f: &mut dyn FnMut(&[usize])) {
    let mut buf = items.to_vec();
    permute_rec(&mut buf, 0, f);
}

fn permute_rec(buf: &mut Vec<usize>, k: usize, f: &mut dyn FnMut(&[usize])) {
    if k == buf.len() {
        f(buf);
        return;
    }
    for i in k..buf.len() {
        buf.swap(k, i);
        permute_rec(buf, k + 1, f);
        buf.swap(k, i);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::gen_figure1;

    fn unit(n: usize) -> Vec<Q> {
        vec![q(1); n]
    }

    fn all(_: usize, _: usize) -> bool {
        true
    }

    fn k(n: usize) -> Trigraph {
        Trigraph::from_edges(
            n,
            &(0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect::<Vec<_>>(),
            &[],
        )
        .unwrap()
    }

    #[test]
    fn mis_small_goldens() {
        let budget = OracleBudget::default();
        let caps = OracleCaps::default();
        assert_eq!(exact_mis(&k(5), &unit(5), &budget, &caps).unwrap().1, q(1));
        assert_eq!(exact_mis(&Trigraph::new(6), &unit(6), &budget, &caps).unwrap().1, q(6));
        let (g, _) = gen_figure1();
        let (set, v) = exact_mis(&g, &unit(7), &budget, &caps).unwrap();
        assert_eq!(v, q(3));
        assert_eq!(set.len(), 3);
    }

    #[test]
    fn mis_agrees_with_exhaustive_scan() {
        // independent oracle for the oracle: all-subset scan on small graphs
        let budget = OracleBudget::default();
        let caps = OracleCaps::default();
        let (g, _) = gen_figure1();
        let mut brute = q(0);
        for mask in 0u64..(1 << 7) {
            let s: Vec<usize> = (0..7).filter(|&v| mask >> v & 1 == 1).collect();
            if feas::check_independent_set(&g, &s).is_ok() {
                brute = brute.max(q(s.len() as i64));
            }
        }
        assert_eq!(exact_mis(&g, &unit(7), &budget, &caps).unwrap().1, brute);
    }

    #[test]
    fn mis_weighted_prefers_heavy_vertex() {
        let g = Trigraph::from_edges(3, &[(0, 1), (1, 2)], &[]).unwrap();
        let w = vec![q(1), q(5), q(1)];
        let (set, v) = exact_mis(&g, &w, &OracleBudget::default(), &OracleCaps::default()).unwrap();
        assert_eq!(v, q(5));
        assert_eq!(set, vec![1]);
    }

    #[test]
    fn setcol_goldens() {
        let budget = OracleBudget::default();
        let caps = OracleCaps::default();
        let (_, k3) = exact_set_coloring(&k(3), &[1, 1, 1], &budget, &caps).unwrap();
        assert_eq!(k3, 3);
        let (_, k2b2) = exact_set_coloring(&k(2), &[2, 2], &budget, &caps).unwrap();
        assert_eq!(k2b2, 4);
        let (g, _) = gen_figure1();
        let (_, chi) = exact_set_coloring(&g, &[1; 7], &budget, &caps).unwrap();
        assert_eq!(chi, 4);
    }

    #[test]
    fn setcol_odd_cycle_b2() {
        // fractional-style bound: C5 with b = 2 needs 5 colors
        let c5 = Trigraph::from_edges(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)], &[]).unwrap();
        let (_, v) = exact_set_coloring(&c5, &[2; 5], &OracleBudget::default(), &OracleCaps::default()).unwrap();
        assert_eq!(v, 5);
    }

    #[test]
    fn msim_goldens() {
        let budget = OracleBudget::default();
        let caps = OracleCaps::default();
        let one = Trigraph::from_edges(2, &[(0, 1)], &[]).unwrap();
        assert_eq!(exact_msim(&one, &|_, _| q(1), &all, &budget, &caps).unwrap().1, q(1));
        let two_k2 = Trigraph::from_edges(4, &[(0, 1), (2, 3)], &[]).unwrap();
        assert_eq!(exact_msim(&two_k2, &|_, _| q(1), &all, &budget, &caps).unwrap().1, q(2));
        let (g, _) = gen_figure1();
        assert_eq!(exact_msim(&g, &|_, _| q(1), &all, &budget, &caps).unwrap().1, q(1));
    }

    #[test]
    fn msim_respects_prescribed_set() {
        let two_k2 = Trigraph::from_edges(4, &[(0, 1), (2, 3)], &[]).unwrap();
        let y = |u: usize, v: usize| (u, v) == (2, 3);
        let (edges, v) =
            exact_msim(&two_k2, &|_, _| q(1), &y, &OracleBudget::default(), &OracleCaps::default())
                .unwrap();
        assert_eq!(v, q(1));
        assert_eq!(edges, vec![(2, 3)]);
    }

    #[test]
    fn mlisf_goldens() {
        let budget = OracleBudget::default();
        let caps = OracleCaps::default();
        let star = Trigraph::from_edges(4, &[(0, 1), (0, 2), (0, 3)], &[]).unwrap();
        let (stars, v) = exact_mlisf(&star, &unit(4), &all, &budget, &caps).unwrap();
        assert_eq!(v, q(3));
        assert_eq!(stars.len(), 1);
        assert_eq!(stars[0].root, 0);

        let edgeless = Trigraph::new(4);
        assert_eq!(exact_mlisf(&edgeless, &unit(4), &all, &budget, &caps).unwrap().1, q(0));
    }

    #[test]
    fn mlisf_bb_matches_enumeration() {
        let budget = OracleBudget::default();
        for seed in 0..6u64 {
            let (g, _) = crate::instances::gen_by_uncontraction(11, 2, seed).unwrap();
            let w = unit(11);
            let (_, by_enum) = mlisf_enumerate(&g, &w, &all, &budget).unwrap();
            let (_, by_bb) = mlisf_bb(&g, &w, &all, &budget).unwrap();
            assert_eq!(by_enum, by_bb, "seed {seed}");
        }
    }

    #[test]
    fn aihp_goldens() {
        let budget = OracleBudget::default();
        let caps = OracleCaps::default();
        // K2 packing on 2K2: two copies
        let two_k2 = Trigraph::from_edges(4, &[(0, 1), (2, 3)], &[]).unwrap();
        let k2 = k(2);
        let indicator = |_: &[usize]| q(1);
        let (copies, v) = exact_aihp(&two_k2, &k2, &[1; 4], &[1; 2], &indicator, &budget, &caps).unwrap();
        assert_eq!(v, q(2));
        assert_eq!(copies.len(), 2);

        // triangle packing on two disjoint triangles
        let two_k3 =
            Trigraph::from_edges(6, &[(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)], &[]).unwrap();
        let (copies, v) =
            exact_aihp(&two_k3, &k(3), &[1; 6], &[1; 3], &indicator, &budget, &caps).unwrap();
        assert_eq!(v, q(2));
        assert_eq!(copies.len(), 2);
    }

    #[test]
    fn aihp_specializes_to_mis_and_msim() {
        let budget = OracleBudget::default();
        let caps = OracleCaps::default();
        for seed in 0..4u64 {
            let (g, _) = crate::instances::gen_by_uncontraction(10, 2, seed).unwrap();
            let k1 = Trigraph::new(1);
            let indicator = |_: &[usize]| q(1);
            let (_, by_aihp) =
                exact_aihp(&g, &k1, &[1; 10], &[1], &indicator, &budget, &caps).unwrap();
            let (_, by_mis) = exact_mis(&g, &unit(10), &budget, &caps).unwrap();
            assert_eq!(by_aihp, by_mis, "seed {seed}");

            let (_, by_k2) =
                exact_aihp(&g, &k(2), &[1; 10], &[1; 2], &indicator, &budget, &caps).unwrap();
            let (_, by_msim) = exact_msim(&g, &|_, _| q(1), &all, &budget, &caps).unwrap();
            assert_eq!(by_k2, by_msim, "seed {seed}");
        }
    }

    #[test]
    fn labels_constrain_aihp() {
        // one edge, but labels forbid using it in one direction only
        let g = Trigraph::from_edges(2, &[(0, 1)], &[]).unwrap();
        let k2 = k(2);
        let indicator = |_: &[usize]| q(1);
        let (_, v) = exact_aihp(&g, &k2, &[1, 2], &[1, 2], &indicator, &OracleBudget::default(), &OracleCaps::default()).unwrap();
        assert_eq!(v, q(1));
        let (_, v2) = exact_aihp(&g, &k2, &[1, 1], &[1, 2], &indicator, &OracleBudget::default(), &OracleCaps::default()).unwrap();
        assert_eq!(v2, q(0));
    }

    #[test]
    fn budget_failure_is_loud() {
        let tiny = OracleBudget { node_limit: 3, wall_ms: None };
        let (g, _) = gen_figure1();
        match exact_mis(&g, &unit(7), &tiny, &OracleCaps::default()) {
            Err(Error::BudgetExceeded { .. }) => {}
            other => panic!("expected budget error, got {other:?}"),
        }
    }
}
