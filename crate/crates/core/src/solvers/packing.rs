//! Generalized packings: labeled tuple-weighted independent H-packing for a
//! small connected pattern, and max leaves induced star forests (with the
//! induced-forest wrapper).
//!
//! The H-packing run structure follows the compatible-trigraph enumeration:
//! every way the pattern can be batched into quotient parts is one run. A
//! run with a black pattern edge admits at most one copy per committed part
//! tuple, so its weight table is filled by direct realization search; a run
//! without black edges packs many copies per tuple and fills the table with
//! recursive packing calls on the parts' union. Either way the tuples are
//! colored so that same-class tuples are disjoint and red-disjoint, and a
//! recursive packing call on the total quotient graph combines them.

use crate::balance::{BalancedPartitionResult, BalanceSource};
use crate::coloring_util::{color_classes, distance2_edge_coloring, greedy_coloring_degeneracy};
use crate::driver::{drive, Adapter, ApproxResult, RecCtx, TradeoffConfig};
use crate::error::{Error, Result};
use crate::feas::{check_aihp_packing, check_star_forest, tuple_realizes};
use crate::oracles::{exact_aihp, exact_mlisf};
use crate::solvers::matching::{MsimAdapter, MsimInstance};
use crate::solvers::mis::{WmisAdapter, WmisInstance};
use crate::trigraph::{EdgeKind, Resolution, Trigraph, VertexPartition};
use crate::{q, Q};
use std::collections::{BTreeMap, BTreeSet};

/// One induced star: a root and its leaves.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Star {
    pub root: usize,
    pub leaves: Vec<usize>,
}

// ---------------------------------------------------------------------------
// Max leaves induced star forest
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
pub struct StarForestInstance {
    pub graph: Trigraph,
    pub weights: Vec<Q>,
    /// Prescribed edge set; `None` means all edges.
    pub y: Option<BTreeSet<(usize, usize)>>,
}

impl StarForestInstance {
    pub fn new(
        graph: Trigraph,
        weights: Vec<Q>,
        y: Option<BTreeSet<(usize, usize)>>,
    ) -> Result<Self> {
        if !graph.is_graph() {
            return Err(Error::invalid("star forest expects a graph"));
        }
        if weights.len() != graph.n() {
            return Err(Error::invalid("weight vector length mismatch"));
        }
        if let Some(set) = &y {
            for &(u, v) in set {
                if !graph.is_black(u.min(v), u.max(v)) {
                    return Err(Error::invalid(format!("prescribed pair {u}-{v} is not an edge")));
                }
            }
        }
        Ok(StarForestInstance { graph, weights, y })
    }

    pub fn unit(graph: Trigraph) -> Result<Self> {
        let n = graph.n();
        StarForestInstance::new(graph, vec![q(1); n], None)
    }

    pub fn in_y(&self, u: usize, v: usize) -> bool {
        match &self.y {
            None => true,
            Some(set) => set.contains(&(u.min(v), u.max(v))),
        }
    }

    fn value_of(&self, stars: &[Star]) -> Q {
        stars.iter().flat_map(|s| &s.leaves).map(|&l| self.weights[l]).sum()
    }

    fn restricted(
        &self,
        vertices: &[usize],
        extra: Option<&dyn Fn(usize, usize) -> bool>,
    ) -> Result<(StarForestInstance, Vec<usize>)> {
        let (sub, map) = self.graph.induced(vertices)?;
        let mut y = BTreeSet::new();
        for (a, b) in sub.black_edges() {
            let (u, v) = (map[a], map[b]);
            if self.in_y(u, v) && extra.map_or(true, |f| f(u, v)) {
                y.insert((a, b));
            }
        }
        let weights = vertices.iter().map(|&v| self.weights[v]).collect();
        Ok((StarForestInstance::new(sub, weights, Some(y))?, map))
    }
}

pub struct MlisfAdapter;

impl Adapter for MlisfAdapter {
    type Inst = StarForestInstance;
    type Sol = Vec<Star>;

    fn name(&self) -> &'static str {
        "mlisf"
    }

    fn size(&self, inst: &StarForestInstance) -> usize {
        inst.graph.n()
    }

    fn graph<'i>(&self, inst: &'i StarForestInstance) -> &'i Trigraph {
        &inst.graph
    }

    fn per_level_factor(&self, d_eff: usize) -> f64 {
        let d = d_eff.max(1) as f64;
        3.0 * (2.0 * (d - 1.0) * d + 1.0).max(2.0 * d + 1.0)
    }

    fn exact(&self, inst: &StarForestInstance, cfg: &TradeoffConfig) -> Result<(Vec<Star>, Q)> {
        exact_mlisf(
            &inst.graph,
            &inst.weights,
            &|u, v| inst.in_y(u, v),
            &cfg.budget,
            &cfg.caps,
        )
    }

    fn verify(&self, inst: &StarForestInstance, sol: &Vec<Star>, value: &Q) -> Result<()> {
        check_star_forest(&inst.graph, &|u, v| inst.in_y(u, v), sol)?;
        if inst.value_of(sol) != *value {
            return Err(Error::Contract("reported star-forest value does not match".into()));
        }
        Ok(())
    }

    fn decompose(
        &self,
        inst: &StarForestInstance,
        bp: &BalancedPartitionResult,
        ctx: &mut RecCtx<'_>,
    ) -> Result<(Vec<Star>, Q, Q)> {
        let quotient = inst.graph.quotient(&bp.partition)?;
        let (active_v, active_r, active_b) = y_categories(inst, bp, &quotient);
        let mut candidates: Vec<(Vec<Star>, Q, Q)> = Vec::new();
        if active_v {
            candidates.push(star_branch_within(inst, bp, &quotient, ctx)?);
        }
        if active_r {
            candidates.push(star_branch_red(inst, bp, &quotient, ctx)?);
        }
        if active_b {
            candidates.push(star_branch_black(inst, bp, &quotient, ctx)?);
        }
        let active = candidates.len().max(1);
        let worst = candidates.iter().map(|(_, _, b)| *b).max().unwrap_or_else(|| q(1));
        let best = candidates
            .into_iter()
            .max_by(|(_, va, _), (_, vb, _)| va.cmp(vb))
            .unwrap_or((Vec::new(), q(0), q(1)));
        Ok((best.0, best.1, q(active as i64) * worst))
    }
}

fn y_categories(
    inst: &StarForestInstance,
    bp: &BalancedPartitionResult,
    quotient: &Trigraph,
) -> (bool, bool, bool) {
    let (mut inside, mut red, mut black) = (false, false, false);
    for (u, v) in inst.graph.black_edges() {
        if !inst.in_y(u, v) {
            continue;
        }
        let (a, b) = (bp.partition.part_of(u), bp.partition.part_of(v));
        if a == b {
            inside = true;
        } else {
            match quotient.edge(a, b) {
                EdgeKind::Red => red = true,
                EdgeKind::Black => black = true,
                EdgeKind::Absent => {}
            }
        }
    }
    (inside, red, black)
}

/// A_v: per-part recursive star forests packed by one WMIS call per class.
fn star_branch_within(
    inst: &StarForestInstance,
    bp: &BalancedPartitionResult,
    quotient: &Trigraph,
    ctx: &mut RecCtx<'_>,
) -> Result<(Vec<Star>, Q, Q)> {
    let parts = bp.partition.parts();
    let mut part_stars: Vec<Vec<Star>> = Vec::with_capacity(parts.len());
    let mut part_values: Vec<Q> = Vec::with_capacity(parts.len());
    let mut r_sub = q(1);
    for part in parts {
        let (sub_inst, map) = inst.restricted(part, None)?;
        let matrix = bp.conform_for_vertices(part);
        let (stars, value, bound) = ctx.recurse(&MlisfAdapter, &sub_inst, matrix)?;
        r_sub = r_sub.max(bound);
        part_stars.push(
            stars
                .into_iter()
                .map(|s| Star {
                    root: map[s.root],
                    leaves: s.leaves.into_iter().map(|l| map[l]).collect(),
                })
                .collect(),
        );
        part_values.push(value);
    }

    let red = quotient.views().red_graph;
    let classes = color_classes(&greedy_coloring_degeneracy(&red));
    let k_eff = classes.len().max(1);
    let mut best: (Vec<Star>, Q) = (Vec::new(), q(0));
    let mut r_pack = q(1);
    for class in &classes {
        let (class_graph, _) = quotient.induced(class)?;
        let class_inst =
            WmisInstance::new(class_graph, class.iter().map(|&p| part_values[p]).collect())?;
        let matrix = bp.conform_for_parts(class);
        let (picked, _, bound) = ctx.recurse(&WmisAdapter, &class_inst, matrix)?;
        r_pack = r_pack.max(bound);
        let mut union = Vec::new();
        for &local in &picked {
            union.extend(part_stars[class[local]].iter().cloned());
        }
        let value = inst.value_of(&union);
        if value > best.1 {
            best = (union, value);
        }
    }
    Ok((best.0, best.1, q(k_eff as i64) * r_sub * r_pack))
}

/// A_r: per-red-edge one-side-root cross star forests packed per distance-2
/// class by an induced-matching call on the class cleanup.
fn star_branch_red(
    inst: &StarForestInstance,
    bp: &BalancedPartitionResult,
    quotient: &Trigraph,
    ctx: &mut RecCtx<'_>,
) -> Result<(Vec<Star>, Q, Q)> {
    let parts = bp.partition.parts();
    let red = quotient.views().red_graph;
    let (red_edges, colors) = distance2_edge_coloring(&red);
    if red_edges.is_empty() {
        return Ok((Vec::new(), q(0), q(1)));
    }
    let z_eff = colors.iter().copied().max().unwrap_or(0) + 1;

    let mut per_edge: BTreeMap<(usize, usize), (Vec<Star>, Q)> = BTreeMap::new();
    let mut r_sub = q(1);
    for &(a, b) in &red_edges {
        let mut union: Vec<usize> = parts[a].iter().chain(parts[b].iter()).copied().collect();
        union.sort_unstable();
        let part_of = &bp.partition;
        let crosses = move |u: usize, v: usize| part_of.part_of(u) != part_of.part_of(v);
        let (sub_inst, map) = inst.restricted(&union, Some(&crosses))?;
        let matrix = bp.conform_for_vertices(&union);
        let (stars, value, bound) = ctx.recurse(&MlisfAdapter, &sub_inst, matrix)?;
        r_sub = r_sub.max(bound);
        let stars = stars
            .into_iter()
            .map(|s| Star {
                root: map[s.root],
                leaves: s.leaves.into_iter().map(|l| map[l]).collect(),
            })
            .collect();
        per_edge.insert((a, b), (stars, value));
    }

    let mut best: (Vec<Star>, Q) = (Vec::new(), q(0));
    let mut r_pack = q(1);
    for class in 0..z_eff {
        let class_edges: Vec<(usize, usize)> = red_edges
            .iter()
            .zip(&colors)
            .filter(|(_, &c)| c == class)
            .map(|(&e, _)| e)
            .collect();
        if class_edges.is_empty() {
            continue;
        }
        let mut incident: Vec<usize> = class_edges.iter().flat_map(|&(a, b)| [a, b]).collect();
        incident.sort_unstable();
        incident.dedup();
        let (sub_tri, map) = quotient.induced(&incident)?;
        let sub_reds: BTreeSet<(usize, usize)> = sub_tri.red_edges().collect();
        let expected: BTreeSet<(usize, usize)> = class_edges
            .iter()
            .map(|&(a, b)| {
                let ia = incident.binary_search(&a).unwrap();
                let ib = incident.binary_search(&b).unwrap();
                (ia.min(ib), ia.max(ib))
            })
            .collect();
        if sub_reds != expected {
            return Err(Error::Contract(
                "distance-2 class left unexpected red edges in its cleanup".into(),
            ));
        }
        let resolution: BTreeMap<(usize, usize), Resolution> =
            sub_reds.iter().map(|&e| (e, Resolution::ToBlack)).collect();
        let cleaned = sub_tri.cleanup(&resolution)?;
        let mut y = BTreeSet::new();
        let mut weights = BTreeMap::new();
        for &(ia, ib) in &expected {
            let key = (map[ia].min(map[ib]), map[ia].max(map[ib]));
            y.insert((ia, ib));
            weights.insert((ia, ib), per_edge[&key].1);
        }
        let pack_inst = MsimInstance::new(cleaned, Some(y), weights)?;
        let matrix = bp.conform_for_parts(&incident);
        let (picked, _, bound) = ctx.recurse(&MsimAdapter, &pack_inst, matrix)?;
        r_pack = r_pack.max(bound);
        let mut union: Vec<Star> = Vec::new();
        for (ia, ib) in picked {
            let key = (map[ia].min(map[ib]), map[ia].max(map[ib]));
            union.extend(per_edge[&key].0.iter().cloned());
        }
        let value = inst.value_of(&union);
        if value > best.1 {
            best = (union, value);
        }
    }
    Ok((best.0, best.1, q(z_eff as i64) * r_sub * r_pack))
}

/// A_b: per-part WMIS leaves, one recursive star-forest call on the black
/// quotient, selections split by a red-conflict coloring, roots chosen to
/// maximize the prescribed-edge-filtered leaf weight.
fn star_branch_black(
    inst: &StarForestInstance,
    bp: &BalancedPartitionResult,
    quotient: &Trigraph,
    ctx: &mut RecCtx<'_>,
) -> Result<(Vec<Star>, Q, Q)> {
    let parts = bp.partition.parts();

    let mut part_sets: Vec<Vec<usize>> = Vec::with_capacity(parts.len());
    let mut part_values: Vec<Q> = Vec::with_capacity(parts.len());
    let mut r_wmis = q(1);
    for part in parts {
        let (sub, map) = inst.graph.induced(part)?;
        let sub_inst = WmisInstance::new(sub, part.iter().map(|&v| inst.weights[v]).collect())?;
        let matrix = bp.conform_for_vertices(part);
        let (set, value, bound) = ctx.recurse(&WmisAdapter, &sub_inst, matrix)?;
        r_wmis = r_wmis.max(bound);
        part_sets.push(set.into_iter().map(|i| map[i]).collect());
        part_values.push(value);
    }

    let black = quotient.views().black_graph;
    let quot_inst = StarForestInstance::new(black, part_values.clone(), None)?;
    let all_parts: Vec<usize> = (0..parts.len()).collect();
    let matrix = bp.conform_for_parts(&all_parts);
    let (quot_stars, _, r_quot) = ctx.recurse(&MlisfAdapter, &quot_inst, matrix)?;
    if quot_stars.is_empty() {
        return Ok((Vec::new(), q(0), r_wmis * r_quot));
    }

    // collect quotient star edges and color the red-conflict graph on them
    let mut edges: Vec<(usize, usize, usize)> = Vec::new(); // (star idx, root part, leaf part)
    for (si, s) in quot_stars.iter().enumerate() {
        for &l in &s.leaves {
            edges.push((si, s.root, l));
        }
    }
    let m = edges.len();
    let mut conflicts = Vec::new();
    for i in 0..m {
        for j in i + 1..m {
            let (_, r1, l1) = edges[i];
            let (_, r2, l2) = edges[j];
            let red_link = [r1, l1]
                .iter()
                .any(|&x| [r2, l2].iter().any(|&y| quotient.edge(x, y) == EdgeKind::Red));
            if red_link {
                conflicts.push((i, j));
            }
        }
    }
    let conflict_graph = Trigraph::from_edges(m, &conflicts, &[])?;
    let classes = color_classes(&greedy_coloring_degeneracy(&conflict_graph));
    let c_eff = classes.len().max(1);

    let mut best: (Vec<Star>, Q) = (Vec::new(), q(0));
    for class in &classes {
        // per star: surviving leaf parts in this class
        let mut star_leaf_parts: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for &ei in class {
            let (si, _, l) = edges[ei];
            star_leaf_parts.entry(si).or_default().push(l);
        }
        let mut lifted: Vec<Star> = Vec::new();
        for (&si, leaf_parts) in &star_leaf_parts {
            let root_part = quot_stars[si].root;
            // root vertex maximizing the prescribed-filtered leaf weight
            let mut best_root: Option<(usize, Q, Vec<Vec<usize>>)> = None;
            for &r in &parts[root_part] {
                let mut chosen: Vec<Vec<usize>> = Vec::new();
                let mut total = q(0);
                for &lp in leaf_parts {
                    let leaves: Vec<usize> = part_sets[lp]
                        .iter()
                        .copied()
                        .filter(|&v| inst.in_y(r, v) && inst.graph.is_black(r, v))
                        .collect();
                    total = total + leaves.iter().map(|&v| inst.weights[v]).sum::<Q>();
                    chosen.push(leaves);
                }
                let better = match &best_root {
                    None => true,
                    Some((br, bt, _)) => total > *bt || (total == *bt && r < *br),
                };
                if better {
                    best_root = Some((r, total, chosen));
                }
            }
            if let Some((r, total, chosen)) = best_root {
                if total > q(0) || chosen.iter().any(|c| !c.is_empty()) {
                    let leaves: Vec<usize> = chosen.into_iter().flatten().collect();
                    if !leaves.is_empty() {
                        lifted.push(Star { root: r, leaves });
                    }
                }
            }
        }
        let value = inst.value_of(&lifted);
        if value > best.1 {
            best = (lifted, value);
        }
    }
    Ok((best.0, best.1, q(c_eff as i64) * r_wmis * r_quot))
}

/// Solve max leaves induced star forest under the configured regime.
pub fn mlisf_approx(
    inst: &StarForestInstance,
    src: &BalanceSource<'_>,
    cfg: &TradeoffConfig,
) -> Result<ApproxResult<Vec<Star>>> {
    drive(&MlisfAdapter, inst, src, cfg)
}

/// Max edge induced forest via the star-forest solver: any tree's edges
/// split into three induced star collections, so the star-forest value
/// approximates the forest value within an extra factor 3. The returned
/// star forest is itself an induced forest.
pub fn mief_approx(
    graph: Trigraph,
    y: Option<BTreeSet<(usize, usize)>>,
    src: &BalanceSource<'_>,
    cfg: &TradeoffConfig,
) -> Result<ApproxResult<Vec<Star>>> {
    let n = graph.n();
    let inst = StarForestInstance::new(graph, vec![q(1); n], y)?;
    let mut out = mlisf_approx(&inst, src, cfg)?;
    out.certified_bound = out.certified_bound * q(3);
    Ok(out)
}

// ---------------------------------------------------------------------------
// Labeled tuple-weighted independent H-packing
// ---------------------------------------------------------------------------

/// Weight function over ordered vertex tuples without repetition, stored
/// sparsely with a default rule.
#[derive(Debug, Clone)]
pub struct TupleWeights {
    pub overrides: BTreeMap<Vec<usize>, Q>,
    /// Symmetric tables are keyed by the sorted tuple.
    pub symmetric: bool,
    /// Default for tuples without an override: the isomorphism indicator
    /// (1 when the ordered tuple realizes the pattern) or zero.
    pub indicator_default: bool,
}

impl TupleWeights {
    pub fn indicator() -> Self {
        TupleWeights { overrides: BTreeMap::new(), symmetric: false, indicator_default: true }
    }

    fn lookup(&self, tuple: &[usize]) -> Option<Q> {
        if self.symmetric {
            let mut k = tuple.to_vec();
            k.sort_unstable();
            self.overrides.get(&k).copied()
        } else {
            self.overrides.get(tuple).copied()
        }
    }
}

#[derive(Debug, Clone)]
pub struct AihpInstance {
    pub graph: Trigraph,
    pub pattern: Trigraph,
    pub host_labels: Vec<u32>,
    pub pattern_labels: Vec<u32>,
    pub weights: TupleWeights,
}

impl AihpInstance {
    pub fn new(
        graph: Trigraph,
        pattern: Trigraph,
        host_labels: Vec<u32>,
        pattern_labels: Vec<u32>,
        weights: TupleWeights,
    ) -> Result<Self> {
        if !graph.is_graph() || !pattern.is_graph() {
            return Err(Error::invalid("packing expects graphs"));
        }
        let h = pattern.n();
        if h == 0 {
            return Err(Error::invalid("empty pattern"));
        }
        let comps =
            crate::coloring_util::components_within(&pattern, &(0..h).collect::<Vec<_>>());
        if comps.len() != 1 {
            return Err(Error::invalid("pattern must be connected"));
        }
        if host_labels.len() != graph.n() || pattern_labels.len() != h {
            return Err(Error::invalid("label vector length mismatch"));
        }
        Ok(AihpInstance { graph, pattern, host_labels, pattern_labels, weights })
    }

    pub fn unlabeled(graph: Trigraph, pattern: Trigraph) -> Result<Self> {
        let n = graph.n();
        let h = pattern.n();
        AihpInstance::new(graph, pattern, vec![1; n], vec![1; h], TupleWeights::indicator())
    }

    pub fn tuple_weight(&self, tuple: &[usize]) -> Q {
        if let Some(w) = self.weights.lookup(tuple) {
            return w;
        }
        if self.weights.indicator_default
            && tuple_realizes(&self.graph, &self.pattern, &self.host_labels, &self.pattern_labels, tuple)
        {
            q(1)
        } else {
            q(0)
        }
    }

    fn value_of(&self, copies: &[Vec<usize>]) -> Q {
        copies.iter().map(|c| self.tuple_weight(c)).sum()
    }
}

/// A red-augmented quotient pattern together with the partitions of the
/// pattern's vertex set that witness it.
#[derive(Debug, Clone)]
pub struct CompatibleTrigraph {
    pub trig: Trigraph,
    pub witnesses: Vec<VertexPartition>,
    pub added_red: Vec<(usize, usize)>,
}

/// All partitions Q of the pattern's vertices, each quotient augmented by
/// every red superset, deduplicated up to labeled-trigraph equality (the
/// witnesses of merged duplicates are all kept). Each entry admits a cleanup
/// equal to its witness quotient by undoing the added red pairs.
pub fn compatible_trigraphs(pattern: &Trigraph, cap: usize) -> Result<Vec<CompatibleTrigraph>> {
    let h = pattern.n();
    if h > cap {
        return Err(Error::invalid(format!("pattern size {h} exceeds cap {cap}")));
    }
    let mut out: Vec<CompatibleTrigraph> = Vec::new();
    let mut index: BTreeMap<(usize, Vec<(usize, usize)>, Vec<(usize, usize)>), usize> =
        BTreeMap::new();
    for partition in set_partitions(h) {
        let vp = VertexPartition::new(h, partition)?;
        let base = pattern.quotient(&vp)?;
        let hp = base.n();
        let free_pairs: Vec<(usize, usize)> = (0..hp)
            .flat_map(|a| (a + 1..hp).map(move |b| (a, b)))
            .filter(|&(a, b)| base.edge(a, b) != EdgeKind::Red)
            .collect();
        for mask in 0u32..(1 << free_pairs.len()) {
            let added: Vec<(usize, usize)> = free_pairs
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &e)| e)
                .collect();
            let mut black = Vec::new();
            let mut red: Vec<(usize, usize)> = base.red_edges().collect();
            for (a, b) in base.black_edges() {
                if added.contains(&(a, b)) {
                    red.push((a, b));
                } else {
                    black.push((a, b));
                }
            }
            for &(a, b) in &added {
                if base.edge(a, b) == EdgeKind::Absent {
                    red.push((a, b));
                }
            }
            red.sort_unstable();
            black.sort_unstable();
            let key = (hp, black.clone(), red.clone());
            match index.get(&key) {
                Some(&i) => out[i].witnesses.push(vp.clone()),
                None => {
                    index.insert(key, out.len());
                    let trig = Trigraph::from_edges(hp, &black, &red)?;
                    out.push(CompatibleTrigraph { trig, witnesses: vec![vp.clone()], added_red: added });
                }
            }
        }
    }
    // constructive cleanup-witness check: undoing the added reds of the
    // first witness must reproduce its quotient
    for ct in &out {
        let wq = pattern.quotient(&ct.witnesses[0])?;
        let resolution: BTreeMap<(usize, usize), Resolution> = ct
            .added_red
            .iter()
            .map(|&(a, b)| {
                let kind = wq.edge(a, b);
                let r = match kind {
                    EdgeKind::Black => Resolution::ToBlack,
                    EdgeKind::Absent => Resolution::ToAbsent,
                    EdgeKind::Red => Resolution::KeepRed,
                };
                ((a, b), r)
            })
            .collect();
        let cleaned = ct.trig.cleanup(&resolution)?;
        if cleaned != wq {
            return Err(Error::Contract("compatible trigraph lost its cleanup witness".into()));
        }
    }
    Ok(out)
}

fn set_partitions(h: usize) -> Vec<Vec<Vec<usize>>> {
    // restricted growth strings
    let mut out = Vec::new();
    let mut assignment = vec![0usize; h];
    fn go(assignment: &mut Vec<usize>, pos: usize, max_used: usize, out: &mut Vec<Vec<Vec<usize>>>) {
        if pos == assignment.len() {
            let parts_count = max_used + 1;
            let mut parts = vec![Vec::new(); parts_count];
            for (v, &p) in assignment.iter().enumerate() {
                parts[p].push(v);
            }
            out.push(parts);
            return;
        }
        for c in 0..=max_used + 1 {
            assignment[pos] = c;
            go(assignment, pos + 1, max_used.max(c), out);
        }
    }
    if h == 0 {
        return vec![vec![]];
    }
    assignment[0] = 0;
    go(&mut assignment, 1, 0, &mut out);
    out
}

pub struct AihpAdapter;

impl Adapter for AihpAdapter {
    type Inst = AihpInstance;
    type Sol = Vec<Vec<usize>>;

    fn name(&self) -> &'static str {
        "aihp"
    }

    fn size(&self, inst: &AihpInstance) -> usize {
        inst.graph.n()
    }

    fn graph<'i>(&self, inst: &'i AihpInstance) -> &'i Trigraph {
        &inst.graph
    }

    fn per_level_factor(&self, d_eff: usize) -> f64 {
        // rough profile constant: compatible-trigraph count times a squared
        // per-class factor; only depth selection reads this
        ((d_eff + 1) * (d_eff + 1) * 16) as f64
    }

    fn exact(&self, inst: &AihpInstance, cfg: &TradeoffConfig) -> Result<(Self::Sol, Q)> {
        exact_aihp(
            &inst.graph,
            &inst.pattern,
            &inst.host_labels,
            &inst.pattern_labels,
            &|t| inst.tuple_weight(t),
            &cfg.budget,
            &cfg.caps,
        )
    }

    fn verify(&self, inst: &AihpInstance, sol: &Self::Sol, value: &Q) -> Result<()> {
        check_aihp_packing(
            &inst.graph,
            &inst.pattern,
            &inst.host_labels,
            &inst.pattern_labels,
            sol,
        )?;
        if inst.value_of(sol) != *value {
            return Err(Error::Contract("reported packing value does not match".into()));
        }
        Ok(())
    }

    fn decompose(
        &self,
        inst: &AihpInstance,
        bp: &BalancedPartitionResult,
        ctx: &mut RecCtx<'_>,
    ) -> Result<(Self::Sol, Q, Q)> {
        let quotient = inst.graph.quotient(&bp.partition)?;
        let compat = compatible_trigraphs(&inst.pattern, ctx.cfg.caps.aihp_h)?;

        let mut run_count: i64 = 0;
        let mut best: (Vec<Vec<usize>>, Q) = (Vec::new(), q(0));
        let mut worst_bound = q(1);
        for ct in &compat {
            let has_black = ct.trig.black_edge_count() > 0;
            if has_black {
                run_count += 1;
                let (sol, value, bound) = run_case_a(inst, bp, &quotient, ct, ctx)?;
                worst_bound = worst_bound.max(bound);
                if value > best.1 {
                    best = (sol, value);
                }
            } else {
                for witness in &ct.witnesses {
                    run_count += 1;
                    let (sol, value, bound) = run_case_b(inst, bp, &quotient, ct, witness, ctx)?;
                    worst_bound = worst_bound.max(bound);
                    if value > best.1 {
                        best = (sol, value);
                    }
                }
            }
        }
        let bound = q(run_count.max(1)) * worst_bound;
        Ok((best.0, best.1, bound))
    }
}

/// Injective maps of the compatible trigraph's vertices onto quotient parts
/// inducing a trigraph isomorphism; the precheck prunes parts that cannot
/// host the committed labels.
fn enumerate_iotas(
    quotient: &Trigraph,
    shape: &Trigraph,
    precheck: &dyn Fn(usize, usize) -> bool,
) -> Vec<Vec<usize>> {
    let hp = shape.n();
    let m = quotient.n();
    let mut out = Vec::new();
    let mut chosen: Vec<usize> = Vec::new();
    fn go(
        quotient: &Trigraph,
        shape: &Trigraph,
        precheck: &dyn Fn(usize, usize) -> bool,
        chosen: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        let x = chosen.len();
        if x == shape.n() {
            out.push(chosen.clone());
            return;
        }
        for p in 0..quotient.n() {
            if chosen.contains(&p) || !precheck(x, p) {
                continue;
            }
            if (0..x).all(|y| quotient.edge(chosen[y], p) == shape.edge(y, x)) {
                chosen.push(p);
                go(quotient, shape, precheck, chosen, out);
                chosen.pop();
            }
        }
    }
    if hp <= m {
        go(quotient, shape, precheck, &mut chosen, &mut out);
    }
    out
}

/// Color the candidate part tuples so that same-class tuples are disjoint
/// and pairwise red-disjoint in the quotient.
fn color_tuples(quotient: &Trigraph, tuples: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let m = tuples.len();
    let mut conflicts = Vec::new();
    for i in 0..m {
        for j in i + 1..m {
            let touch = tuples[i].iter().any(|a| tuples[j].contains(a));
            let red_link = tuples[i].iter().any(|&a| {
                tuples[j].iter().any(|&b| quotient.edge(a, b) == EdgeKind::Red)
            });
            if touch || red_link {
                conflicts.push((i, j));
            }
        }
    }
    let g = Trigraph::from_edges(m, &conflicts, &[]).unwrap();
    color_classes(&greedy_coloring_degeneracy(&g))
}

/// Case A (the shape has a black edge): at most one copy fits a committed
/// part tuple, so a direct realization search fills the weight table.
fn run_case_a(
    inst: &AihpInstance,
    bp: &BalancedPartitionResult,
    quotient: &Trigraph,
    ct: &CompatibleTrigraph,
    ctx: &mut RecCtx<'_>,
) -> Result<(Vec<Vec<usize>>, Q, Q)> {
    let parts = bp.partition.parts();
    let iotas = enumerate_iotas(quotient, &ct.trig, &|_, _| true);
    if iotas.is_empty() {
        return Ok((Vec::new(), q(0), q(1)));
    }
    // realization per part image: best single copy (weight, vertex tuple)
    let mut table: BTreeMap<Vec<usize>, (Q, Vec<usize>)> = BTreeMap::new();
    for iota in &iotas {
        let mut image = iota.clone();
        image.sort_unstable();
        if table.contains_key(&image) {
            continue;
        }
        if let Some(entry) = best_realization(inst, parts, &image) {
            table.insert(image, entry);
        }
    }
    run_tuple_classes(inst, bp, quotient, ct, &iotas, ctx, &|iota| {
        let mut image = iota.to_vec();
        image.sort_unstable();
        table.get(&image).map(|(w, tuple)| (*w, vec![tuple.clone()], q(1)))
    })
}

/// Case B (no black edge): a committed part tuple can host many copies; a
/// recursive packing call on the parts' union with refined labels fills the
/// table.
fn run_case_b(
    inst: &AihpInstance,
    bp: &BalancedPartitionResult,
    quotient: &Trigraph,
    ct: &CompatibleTrigraph,
    witness: &VertexPartition,
    ctx: &mut RecCtx<'_>,
) -> Result<(Vec<Vec<usize>>, Q, Q)> {
    let parts = bp.partition.parts();
    let hp = ct.trig.n();
    // label precheck: part p can host shape vertex x only if every committed
    // pattern label of x's witness part occurs in p
    let witness_parts = witness.parts();
    let precheck = |x: usize, p: usize| -> bool {
        witness_parts[x].iter().all(|&pv| {
            parts[p].iter().any(|&v| inst.host_labels[v] == inst.pattern_labels[pv])
        })
    };
    let iotas = enumerate_iotas(quotient, &ct.trig, &precheck);
    if iotas.is_empty() {
        return Ok((Vec::new(), q(0), q(1)));
    }

    // canonical refined labels: ids for (shape vertex, pattern label) pairs
    let mut committed_pairs: Vec<(usize, u32)> = Vec::new();
    for x in 0..hp {
        for &pv in &witness_parts[x] {
            committed_pairs.push((x, inst.pattern_labels[pv]));
        }
    }
    committed_pairs.sort_unstable();
    committed_pairs.dedup();
    let pair_id = |x: usize, l: u32| -> u32 {
        match committed_pairs.binary_search(&(x, l)) {
            Ok(i) => i as u32 + 1,
            Err(_) => 0, // unusable
        }
    };
    let sub_pattern_labels: Vec<u32> = (0..inst.pattern.n())
        .map(|pv| {
            let x = (0..hp).find(|&x| witness_parts[x].contains(&pv)).unwrap();
            pair_id(x, inst.pattern_labels[pv])
        })
        .collect();

    // per-iota recursive packing on the parts' union
    let mut per_iota: Vec<(Q, Vec<Vec<usize>>, Q)> = Vec::with_capacity(iotas.len());
    for iota in &iotas {
        let mut union: Vec<usize> = iota
            .iter()
            .flat_map(|&p| parts[p].iter().copied())
            .collect();
        union.sort_unstable();
        let (sub, map) = inst.graph.induced(&union)?;
        let host_labels: Vec<u32> = union
            .iter()
            .map(|&v| {
                let x = iota.iter().position(|&p| bp.partition.part_of(v) == p).unwrap();
                pair_id(x, inst.host_labels[v])
            })
            .collect();
        let back: BTreeMap<usize, usize> =
            map.iter().enumerate().map(|(new, &old)| (old, new)).collect();
        let overrides: BTreeMap<Vec<usize>, Q> = inst
            .weights
            .overrides
            .iter()
            .filter(|(t, _)| t.iter().all(|v| back.contains_key(v)))
            .map(|(t, w)| (t.iter().map(|v| back[v]).collect(), *w))
            .collect();
        let weights = TupleWeights {
            overrides,
            symmetric: inst.weights.symmetric,
            indicator_default: inst.weights.indicator_default,
        };
        let sub_inst =
            AihpInstance::new(sub, inst.pattern.clone(), host_labels, sub_pattern_labels.clone(), weights)?;
        let matrix = bp.conform_for_vertices(&union);
        let (copies, value, bound) = ctx.recurse(&AihpAdapter, &sub_inst, matrix)?;
        let translated: Vec<Vec<usize>> = copies
            .into_iter()
            .map(|c| c.into_iter().map(|v| map[v]).collect())
            .collect();
        per_iota.push((value, translated, bound));
    }

    let iota_values: BTreeMap<Vec<usize>, (Q, Vec<Vec<usize>>, Q)> = iotas
        .iter()
        .zip(per_iota)
        .map(|(iota, entry)| (iota.clone(), entry))
        .collect();
    run_tuple_classes(inst, bp, quotient, ct, &iotas, ctx, &|iota| {
        iota_values.get(iota).cloned()
    })
}

/// Shared class machinery: color the tuples so that same-class tuples are
/// disjoint and red-disjoint, build a symmetric weight table per class from
/// `entry_for` (queried per ordered tuple), recurse on the total quotient
/// with the total shape, lift through the stored sub-solutions.
fn run_tuple_classes(
    inst: &AihpInstance,
    bp: &BalancedPartitionResult,
    quotient: &Trigraph,
    ct: &CompatibleTrigraph,
    iotas: &[Vec<usize>],
    ctx: &mut RecCtx<'_>,
    entry_for: &dyn Fn(&[usize]) -> Option<(Q, Vec<Vec<usize>>, Q)>,
) -> Result<(Vec<Vec<usize>>, Q, Q)> {
    let classes = color_tuples(quotient, iotas);
    let p_eff = classes.len().max(1);
    let total_host = quotient.total_graph();
    let total_shape = ct.trig.total_graph();
    let all_parts: Vec<usize> = (0..quotient.n()).collect();

    let mut best: (Vec<Vec<usize>>, Q) = (Vec::new(), q(0));
    let mut r_inner = q(1);
    let mut r_outer = q(1);
    for class in &classes {
        let mut overrides: BTreeMap<Vec<usize>, Q> = BTreeMap::new();
        let mut lifts: BTreeMap<Vec<usize>, Vec<Vec<usize>>> = BTreeMap::new();
        for &ti in class {
            let Some((w, sol, bound)) = entry_for(&iotas[ti]) else {
                continue;
            };
            r_inner = r_inner.max(bound);
            let mut image = iotas[ti].clone();
            image.sort_unstable();
            let better = overrides.get(&image).map_or(true, |old| w > *old);
            if better {
                overrides.insert(image.clone(), w);
                lifts.insert(image, sol);
            }
        }
        if overrides.is_empty() {
            continue;
        }
        let weights = TupleWeights { overrides, symmetric: true, indicator_default: false };
        let outer = AihpInstance::new(
            total_host.clone(),
            total_shape.clone(),
            vec![1; total_host.n()],
            vec![1; total_shape.n()],
            weights,
        )?;
        let matrix = bp.conform_for_parts(&all_parts);
        let (chosen, value, bound) = ctx.recurse(&AihpAdapter, &outer, matrix)?;
        r_outer = r_outer.max(bound);
        let mut sol: Vec<Vec<usize>> = Vec::new();
        for tuple in chosen {
            let mut key = tuple.clone();
            key.sort_unstable();
            if let Some(pieces) = lifts.get(&key) {
                sol.extend(pieces.iter().cloned());
            }
        }
        let real_value = inst.value_of(&sol);
        debug_assert_eq!(real_value, value);
        if real_value > best.1 {
            best = (sol, real_value);
        }
    }
    Ok((best.0, best.1, q(p_eff as i64) * r_inner * r_outer))
}

/// Best single label-preserving copy of the pattern whose vertex set lies in
/// the given parts and touches each of them.
fn best_realization(
    inst: &AihpInstance,
    parts: &[Vec<usize>],
    image: &[usize],
) -> Option<(Q, Vec<usize>)> {
    let h = inst.pattern.n();
    let pool: Vec<usize> = image.iter().flat_map(|&p| parts[p].iter().copied()).collect();
    let mut best: Option<(Q, Vec<usize>)> = None;
    let mut tuple: Vec<usize> = Vec::with_capacity(h);
    let pure_indicator =
        inst.weights.indicator_default && inst.weights.overrides.is_empty();
    fn go(
        inst: &AihpInstance,
        image: &[usize],
        pool: &[usize],
        tuple: &mut Vec<usize>,
        best: &mut Option<(Q, Vec<usize>)>,
        pure_indicator: bool,
        part_of: &dyn Fn(usize) -> usize,
    ) {
        if pure_indicator && best.is_some() {
            return;
        }
        let k = tuple.len();
        if k == inst.pattern.n() {
            let touched: BTreeSet<usize> = tuple.iter().map(|&v| part_of(v)).collect();
            if touched.len() != image.len() {
                return;
            }
            let w = inst.tuple_weight(tuple);
            if w <= q(0) && best.is_some() {
                return;
            }
            if tuple_realizes(&inst.graph, &inst.pattern, &inst.host_labels, &inst.pattern_labels, tuple)
                && best.as_ref().map_or(true, |(bw, _)| w > *bw)
            {
                *best = Some((w, tuple.clone()));
            }
            return;
        }
        for &v in pool {
            if tuple.contains(&v) {
                continue;
            }
            if inst.host_labels[v] != inst.pattern_labels[k] {
                continue;
            }
            if (0..k).all(|i| inst.graph.is_black(tuple[i], v) == inst.pattern.is_black(i, k)) {
                tuple.push(v);
                go(inst, image, pool, tuple, best, pure_indicator, part_of);
                tuple.pop();
            }
        }
    }
    // part lookup scoped to the image
    let mut owner: BTreeMap<usize, usize> = BTreeMap::new();
    for &p in image {
        for &v in &parts[p] {
            owner.insert(v, p);
        }
    }
    let part_of = move |v: usize| owner[&v];
    go(inst, image, &pool, &mut tuple, &mut best, pure_indicator, &part_of);
    best
}

/// Solve the labeled independent H-packing under the configured regime.
pub fn aihp_approx(
    inst: &AihpInstance,
    src: &BalanceSource<'_>,
    cfg: &TradeoffConfig,
) -> Result<ApproxResult<Vec<Vec<usize>>>> {
    drive(&AihpAdapter, inst, src, cfg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::driver::Regime;
    use crate::instances::{gen_by_uncontraction, gen_figure1, greedy_sequence};
    use crate::oracles::{OracleBudget, OracleCaps};

    fn cfg_q(qd: u32) -> TradeoffConfig {
        TradeoffConfig { regime: Regime::Fixed(qd), ..TradeoffConfig::default() }
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
    fn compatible_trigraphs_of_k1_and_k2() {
        let one = compatible_trigraphs(&Trigraph::new(1), 4).unwrap();
        assert_eq!(one.len(), 1);
        assert_eq!(one[0].trig.n(), 1);

        let two = compatible_trigraphs(&k(2), 4).unwrap();
        // single vertex, red edge, black edge
        assert_eq!(two.len(), 3);
        let shapes: BTreeSet<(usize, usize, usize)> = two
            .iter()
            .map(|ct| (ct.trig.n(), ct.trig.black_edge_count(), ct.trig.red_edge_count()))
            .collect();
        assert!(shapes.contains(&(1, 0, 0)));
        assert!(shapes.contains(&(2, 1, 0)));
        assert!(shapes.contains(&(2, 0, 1)));
    }

    #[test]
    fn compatible_trigraphs_of_p3_by_enumeration() {
        // independent recount: enumerate all (partition, red superset) pairs
        // and count distinct labeled trigraphs
        let p3 = Trigraph::from_edges(3, &[(0, 1), (1, 2)], &[]).unwrap();
        let got = compatible_trigraphs(&p3, 4).unwrap();
        let mut brute: BTreeSet<(usize, Vec<(usize, usize)>, Vec<(usize, usize)>)> = BTreeSet::new();
        for parts in set_partitions(3) {
            let vp = VertexPartition::new(3, parts).unwrap();
            let base = p3.quotient(&vp).unwrap();
            let hp = base.n();
            let pairs: Vec<(usize, usize)> = (0..hp)
                .flat_map(|a| (a + 1..hp).map(move |b| (a, b)))
                .filter(|&(a, b)| base.edge(a, b) != EdgeKind::Red)
                .collect();
            for mask in 0u32..(1 << pairs.len()) {
                let mut black = Vec::new();
                let mut red: Vec<(usize, usize)> = base.red_edges().collect();
                for (i, &(a, b)) in pairs.iter().enumerate() {
                    if mask >> i & 1 == 1 {
                        red.push((a, b));
                    } else if base.edge(a, b) == EdgeKind::Black {
                        black.push((a, b));
                    }
                }
                red.sort_unstable();
                black.sort_unstable();
                brute.insert((hp, black, red));
            }
        }
        assert_eq!(got.len(), brute.len());
        // every entry passes the cleanup-witness check by construction of
        // compatible_trigraphs; spot check the count for K2 inside P3's list
        assert!(got.iter().any(|ct| ct.trig.n() == 1));
    }

    #[test]
    fn star_forest_k14_all_leaves() {
        let g = Trigraph::from_edges(5, &[(0, 1), (0, 2), (0, 3), (0, 4)], &[]).unwrap();
        let seq = greedy_sequence(&g, 2).unwrap().sequence.unwrap();
        let inst = StarForestInstance::unit(g).unwrap();
        let out = mlisf_approx(&inst, &BalanceSource::Sequence(&seq), &cfg_q(1)).unwrap();
        assert_eq!(out.value, q(4));
    }

    #[test]
    fn star_forest_edgeless_zero() {
        let g = Trigraph::new(5);
        let seq = greedy_sequence(&g, 0).unwrap().sequence.unwrap();
        let inst = StarForestInstance::unit(g).unwrap();
        let out = mlisf_approx(&inst, &BalanceSource::Sequence(&seq), &cfg_q(1)).unwrap();
        assert_eq!(out.value, q(0));
        assert!(out.solution.is_empty());
    }

    #[test]
    fn star_forest_figure1_sound() {
        let (g, seq) = gen_figure1();
        let inst = StarForestInstance::unit(g.clone()).unwrap();
        let out = mlisf_approx(&inst, &BalanceSource::Sequence(&seq), &cfg_q(1)).unwrap();
        let (_, opt) = exact_mlisf(
            &g,
            &inst.weights,
            &|_, _| true,
            &OracleBudget::default(),
            &OracleCaps::default(),
        )
        .unwrap();
        assert!(out.value <= opt);
        if out.value > q(0) {
            assert!(opt / out.value <= out.certified_bound);
        }
    }

    #[test]
    fn mief_path_keeps_value_and_triples_bound() {
        let p5 = Trigraph::from_edges(5, &[(0, 1), (1, 2), (2, 3), (3, 4)], &[]).unwrap();
        let seq = greedy_sequence(&p5, 2).unwrap().sequence.unwrap();
        let inst = StarForestInstance::unit(p5.clone()).unwrap();
        let star_out = mlisf_approx(&inst, &BalanceSource::Sequence(&seq), &cfg_q(1)).unwrap();
        let forest_out = mief_approx(p5, None, &BalanceSource::Sequence(&seq), &cfg_q(1)).unwrap();
        assert_eq!(forest_out.value, star_out.value);
        assert_eq!(forest_out.certified_bound, star_out.certified_bound * q(3));
        // oracle max-edge induced forest of P5 is 4 (the path itself)
        assert!(forest_out.value >= q(4) / forest_out.certified_bound);
    }

    #[test]
    fn aihp_triangles_packed() {
        let host =
            Trigraph::from_edges(6, &[(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)], &[]).unwrap();
        let seq = greedy_sequence(&host, 2).unwrap().sequence.unwrap();
        let inst = AihpInstance::unlabeled(host, k(3)).unwrap();
        let out = aihp_approx(&inst, &BalanceSource::Sequence(&seq), &cfg_q(1)).unwrap();
        assert_eq!(out.value, q(2));
    }

    #[test]
    fn aihp_k1_matches_wmis_value() {
        for seed in 0..6u64 {
            let (g, seq) = gen_by_uncontraction(12, 2, seed).unwrap();
            let aihp = AihpInstance::unlabeled(g.clone(), Trigraph::new(1)).unwrap();
            let wmis = crate::solvers::mis::WmisInstance::unit(g).unwrap();
            let a = aihp_approx(&aihp, &BalanceSource::Sequence(&seq), &cfg_q(1)).unwrap();
            let w = crate::solvers::mis::wmis_approx(&wmis, &BalanceSource::Sequence(&seq), &cfg_q(1))
                .unwrap();
            assert_eq!(a.value, w.value, "seed {seed}");
        }
    }

    #[test]
    fn aihp_k2_matches_msim_size() {
        for seed in 0..6u64 {
            let (g, seq) = gen_by_uncontraction(10, 2, seed).unwrap();
            let aihp = AihpInstance::unlabeled(g.clone(), k(2)).unwrap();
            let msim = crate::solvers::matching::MsimInstance::all_edges_unit(g).unwrap();
            let a = aihp_approx(&aihp, &BalanceSource::Sequence(&seq), &cfg_q(1)).unwrap();
            let m =
                crate::solvers::matching::msim_approx(&msim, &BalanceSource::Sequence(&seq), &cfg_q(1))
                    .unwrap();
            assert_eq!(a.value, m.value, "seed {seed}");
        }
    }

    #[test]
    fn case_a_admits_at_most_one_copy_per_committed_tuple() {
        // a compatible shape with a black edge hosts at most one mutually
        // induced pattern copy inside any committed part tuple: exhaustive
        // spot check for K2 and P3 patterns
        let p3 = Trigraph::from_edges(3, &[(0, 1), (1, 2)], &[]).unwrap();
        for pattern in [k(2), p3] {
            let h = pattern.n();
            for seed in [3u64, 6] {
                let (g, seq) = gen_by_uncontraction(12, 2, seed).unwrap();
                let bp = crate::balance::balanced_partition(
                    &g,
                    &BalanceSource::Sequence(&seq),
                    &crate::balance::BalanceParams::practical(2),
                )
                .unwrap();
                let quotient = g.quotient(&bp.partition).unwrap();
                let inst = AihpInstance::unlabeled(g.clone(), pattern.clone()).unwrap();
                for ct in compatible_trigraphs(&pattern, 4).unwrap() {
                    if ct.trig.black_edge_count() == 0 {
                        continue;
                    }
                    for iota in enumerate_iotas(&quotient, &ct.trig, &|_, _| true) {
                        let union: Vec<usize> = iota
                            .iter()
                            .flat_map(|&p| bp.partition.parts()[p].iter().copied())
                            .collect();
                        // exhaustive: two disjoint copies, both touching all
                        // committed parts, mutually induced
                        let mut two_found = false;
                        let tuples: Vec<Vec<usize>> = {
                            let mut out = Vec::new();
                            collect_touching_tuples(&inst, &bp, &iota, &union, h, &mut out);
                            out
                        };
                        'outer: for (i, a) in tuples.iter().enumerate() {
                            for b in tuples.iter().skip(i + 1) {
                                if a.iter().any(|v| b.contains(v)) {
                                    continue;
                                }
                                let separated = a.iter().all(|&x| {
                                    b.iter().all(|&y| g.edge(x, y) == EdgeKind::Absent)
                                });
                                if separated {
                                    two_found = true;
                                    break 'outer;
                                }
                            }
                        }
                        assert!(
                            !two_found,
                            "two mutually induced copies inside one committed tuple (seed {seed})"
                        );
                    }
                }
            }
        }
    }

    fn collect_touching_tuples(
        inst: &AihpInstance,
        bp: &crate::balance::BalancedPartitionResult,
        iota: &[usize],
        union: &[usize],
        h: usize,
        out: &mut Vec<Vec<usize>>,
    ) {
        // all realizing tuples inside the union that touch every part
        let mut tuple = Vec::with_capacity(h);
        fn go(
            inst: &AihpInstance,
            bp: &crate::balance::BalancedPartitionResult,
            iota: &[usize],
            union: &[usize],
            tuple: &mut Vec<usize>,
            out: &mut Vec<Vec<usize>>,
        ) {
            if tuple.len() == inst.pattern.n() {
                let touched: BTreeSet<usize> =
                    tuple.iter().map(|&v| bp.partition.part_of(v)).collect();
                if touched.len() == iota.len()
                    && crate::feas::tuple_realizes(
                        &inst.graph,
                        &inst.pattern,
                        &inst.host_labels,
                        &inst.pattern_labels,
                        tuple,
                    )
                {
                    out.push(tuple.clone());
                }
                return;
            }
            for &v in union {
                if !tuple.contains(&v) {
                    tuple.push(v);
                    go(inst, bp, iota, union, tuple, out);
                    tuple.pop();
                }
            }
        }
        go(inst, bp, iota, union, &mut tuple, out);
    }

    #[test]
    fn aihp_certificate_sound() {
        for seed in 0..4u64 {
            let (g, seq) = gen_by_uncontraction(10, 2, seed).unwrap();
            let inst = AihpInstance::unlabeled(g.clone(), k(2)).unwrap();
            let out = aihp_approx(&inst, &BalanceSource::Sequence(&seq), &cfg_q(1)).unwrap();
            let (_, opt) = exact_aihp(
                &g,
                &inst.pattern,
                &inst.host_labels,
                &inst.pattern_labels,
                &|t| inst.tuple_weight(t),
                &OracleBudget::default(),
                &OracleCaps::relaxed(),
            )
            .unwrap();
            if out.value > q(0) {
                assert!(opt / out.value <= out.certified_bound, "seed {seed}");
            } else {
                assert_eq!(opt, q(0), "seed {seed}");
            }
        }
    }
}
