//! Max subset induced matching: heaviest induced matching drawn from a
//! prescribed edge set Y.
//!
//! A single level computes three candidates and keeps the heaviest:
//! within-part matchings packed by a weighted-independent-set call per red
//! color class (N_v), per-red-edge cross matchings packed per distance-2
//! edge color class by a recursive matching call on the class's cleanup
//! (N_r), and one recursive matching call on the black quotient whose
//! selections are split by a coloring of the red-conflict graph and lifted
//! through the heaviest prescribed cross edge (N_b).

use crate::balance::{BalancedPartitionResult, BalanceSource};
use crate::coloring_util::{color_classes, distance2_edge_coloring, greedy_coloring_degeneracy};
use crate::driver::{drive, Adapter, ApproxResult, RecCtx, TradeoffConfig};
use crate::error::{Error, Result};
use crate::feas::check_induced_matching;
use crate::oracles::exact_msim;
use crate::solvers::mis::{WmisAdapter, WmisInstance};
use crate::trigraph::{EdgeKind, Resolution, Trigraph};
use crate::{q, Q};
use std::collections::{BTreeMap, BTreeSet};

#[derive(Debug, Clone)]
pub struct MsimInstance {
    pub graph: Trigraph,
    /// Prescribed edge set; `None` means all edges.
    pub y: Option<BTreeSet<(usize, usize)>>,
    /// Edge weights; missing entries default to 1.
    pub weights: BTreeMap<(usize, usize), Q>,
}

impl MsimInstance {
    pub fn new(
        graph: Trigraph,
        y: Option<BTreeSet<(usize, usize)>>,
        weights: BTreeMap<(usize, usize), Q>,
    ) -> Result<Self> {
        if !graph.is_graph() {
            return Err(Error::invalid("induced matching expects a graph"));
        }
        if let Some(set) = &y {
            for &(u, v) in set {
                if !graph.is_black(u.min(v), u.max(v)) {
                    return Err(Error::invalid(format!("prescribed pair {u}-{v} is not an edge")));
                }
            }
        }
        Ok(MsimInstance { graph, y, weights })
    }

    pub fn all_edges_unit(graph: Trigraph) -> Result<Self> {
        MsimInstance::new(graph, None, BTreeMap::new())
    }

    pub fn in_y(&self, u: usize, v: usize) -> bool {
        let key = (u.min(v), u.max(v));
        match &self.y {
            None => true,
            Some(set) => set.contains(&key),
        }
    }

    pub fn weight(&self, u: usize, v: usize) -> Q {
        let key = (u.min(v), u.max(v));
        self.weights.get(&key).copied().unwrap_or_else(|| q(1))
    }

    fn value_of(&self, edges: &[(usize, usize)]) -> Q {
        edges.iter().map(|&(u, v)| self.weight(u, v)).sum()
    }

    /// Y edges grouped by how they sit over the partition: inside a part,
    /// across a red quotient pair, or across a black quotient pair.
    fn y_categories(
        &self,
        bp: &BalancedPartitionResult,
        quotient: &Trigraph,
    ) -> (bool, bool, bool) {
        let mut inside = false;
        let mut red = false;
        let mut black = false;
        for (u, v) in self.graph.black_edges() {
            if !self.in_y(u, v) {
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
}

fn restrict_instance(
    inst: &MsimInstance,
    vertices: &[usize],
    extra_filter: Option<&dyn Fn(usize, usize) -> bool>,
) -> Result<(MsimInstance, Vec<usize>)> {
    let (sub, map) = inst.graph.induced(vertices)?;
    let back: BTreeMap<usize, usize> = map.iter().enumerate().map(|(new, &old)| (old, new)).collect();
    let mut y = BTreeSet::new();
    let mut weights = BTreeMap::new();
    for (a, b) in sub.black_edges() {
        let (u, v) = (map[a], map[b]);
        let keep = inst.in_y(u, v) && extra_filter.map_or(true, |f| f(u, v));
        if keep {
            y.insert((a, b));
            weights.insert((a, b), inst.weight(u, v));
        }
    }
    let _ = back;
    Ok((MsimInstance::new(sub, Some(y), weights)?, map))
}

pub struct MsimAdapter;

impl Adapter for MsimAdapter {
    type Inst = MsimInstance;
    type Sol = Vec<(usize, usize)>;

    fn name(&self) -> &'static str {
        "msim"
    }

    fn size(&self, inst: &MsimInstance) -> usize {
        inst.graph.n()
    }

    fn graph<'i>(&self, inst: &'i MsimInstance) -> &'i Trigraph {
        &inst.graph
    }

    fn per_level_factor(&self, d_eff: usize) -> f64 {
        let d = d_eff.max(1) as f64;
        3.0 * (2.0 * (d - 1.0) * d + 1.0).max(d + 1.0)
    }

    fn exact(&self, inst: &MsimInstance, cfg: &TradeoffConfig) -> Result<(Self::Sol, Q)> {
        exact_msim(
            &inst.graph,
            &|u, v| inst.weight(u, v),
            &|u, v| inst.in_y(u, v),
            &cfg.budget,
            &cfg.caps,
        )
    }

    fn verify(&self, inst: &MsimInstance, sol: &Self::Sol, value: &Q) -> Result<()> {
        check_induced_matching(&inst.graph, &|u, v| inst.in_y(u, v), sol)?;
        if inst.value_of(sol) != *value {
            return Err(Error::Contract("reported matching weight does not match".into()));
        }
        Ok(())
    }

    fn decompose(
        &self,
        inst: &MsimInstance,
        bp: &BalancedPartitionResult,
        ctx: &mut RecCtx<'_>,
    ) -> Result<(Self::Sol, Q, Q)> {
        let quotient = inst.graph.quotient(&bp.partition)?;
        let (active_v, active_r, active_b) = inst.y_categories(bp, &quotient);
        let mut candidates: Vec<(Vec<(usize, usize)>, Q, Q)> = Vec::new();

        if active_v {
            candidates.push(branch_within_parts(inst, bp, &quotient, ctx)?);
        }
        if active_r {
            candidates.push(branch_red_cross(inst, bp, &quotient, ctx)?);
        }
        if active_b {
            candidates.push(branch_black_cross(inst, bp, &quotient, ctx)?);
        }

        let active = candidates.len().max(1);
        let worst_branch_bound =
            candidates.iter().map(|(_, _, b)| *b).max().unwrap_or_else(|| q(1));
        let best = candidates
            .into_iter()
            .max_by(|(_, va, _), (_, vb, _)| va.cmp(vb))
            .unwrap_or((Vec::new(), q(0), q(1)));
        let bound = q(active as i64) * worst_branch_bound;
        let mut edges = best.0;
        edges.sort_unstable();
        Ok((edges, best.1, bound))
    }
}

/// N_v: per-part recursive matchings packed by a WMIS call per class.
fn branch_within_parts(
    inst: &MsimInstance,
    bp: &BalancedPartitionResult,
    quotient: &Trigraph,
    ctx: &mut RecCtx<'_>,
) -> Result<(Vec<(usize, usize)>, Q, Q)> {
    let parts = bp.partition.parts();
    let mut part_matchings: Vec<Vec<(usize, usize)>> = Vec::with_capacity(parts.len());
    let mut part_values: Vec<Q> = Vec::with_capacity(parts.len());
    let mut r_sub = q(1);
    for part in parts {
        let (sub_inst, map) = restrict_instance(inst, part, None)?;
        let matrix = bp.conform_for_vertices(part);
        let (edges, value, bound) = ctx.recurse(&MsimAdapter, &sub_inst, matrix)?;
        r_sub = r_sub.max(bound);
        part_matchings.push(edges.into_iter().map(|(a, b)| (map[a], map[b])).collect());
        part_values.push(value);
    }

    let red = quotient.views().red_graph;
    let classes = color_classes(&greedy_coloring_degeneracy(&red));
    let k_eff = classes.len().max(1);
    let mut best: (Vec<(usize, usize)>, Q) = (Vec::new(), q(0));
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
            union.extend(part_matchings[class[local]].iter().copied());
        }
        let value = inst.value_of(&union);
        if value > best.1 {
            best = (union, value);
        }
    }
    Ok((best.0, best.1, q(k_eff as i64) * r_sub * r_pack))
}

/// N_r: per-red-edge cross matchings packed per distance-2 class by a
/// matching call on the class cleanup (reds of the class turned black).
fn branch_red_cross(
    inst: &MsimInstance,
    bp: &BalancedPartitionResult,
    quotient: &Trigraph,
    ctx: &mut RecCtx<'_>,
) -> Result<(Vec<(usize, usize)>, Q, Q)> {
    let parts = bp.partition.parts();
    let red = quotient.views().red_graph;
    let (red_edges, colors) = distance2_edge_coloring(&red);
    if red_edges.is_empty() {
        return Ok((Vec::new(), q(0), q(1)));
    }
    let z_eff = colors.iter().copied().max().unwrap_or(0) + 1;

    // one recursive matching per red quotient edge, restricted to cross edges
    let mut cross: BTreeMap<(usize, usize), (Vec<(usize, usize)>, Q)> = BTreeMap::new();
    let mut r_sub = q(1);
    for &(a, b) in &red_edges {
        let mut union: Vec<usize> = parts[a].iter().chain(parts[b].iter()).copied().collect();
        union.sort_unstable();
        let part_of = &bp.partition;
        let crosses = move |u: usize, v: usize| part_of.part_of(u) != part_of.part_of(v);
        let (sub_inst, map) = restrict_instance(inst, &union, Some(&crosses))?;
        let matrix = bp.conform_for_vertices(&union);
        let (edges, value, bound) = ctx.recurse(&MsimAdapter, &sub_inst, matrix)?;
        r_sub = r_sub.max(bound);
        cross.insert((a, b), (edges.into_iter().map(|(x, y)| (map[x], map[y])).collect(), value));
    }

    let mut best: (Vec<(usize, usize)>, Q) = (Vec::new(), q(0));
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
        // the class's red edges are exactly the red edges of the induced
        // subtrigraph (distance-2 classes cannot leave stray reds behind)
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
            let (_, value) = &cross[&key];
            y.insert((ia, ib));
            weights.insert((ia, ib), *value);
        }
        let pack_inst = MsimInstance::new(cleaned, Some(y), weights)?;
        let matrix = bp.conform_for_parts(&incident);
        let (picked, _, bound) = ctx.recurse(&MsimAdapter, &pack_inst, matrix)?;
        r_pack = r_pack.max(bound);
        let mut union = Vec::new();
        for (ia, ib) in picked {
            let key = (map[ia].min(map[ib]), map[ia].max(map[ib]));
            union.extend(cross[&key].0.iter().copied());
        }
        let value = inst.value_of(&union);
        if value > best.1 {
            best = (union, value);
        }
    }
    Ok((best.0, best.1, q(z_eff as i64) * r_sub * r_pack))
}

/// N_b: one matching call on the black quotient, selections split by a
/// coloring of the red-conflict graph, lifted through the heaviest
/// prescribed cross edge of each selected pair.
fn branch_black_cross(
    inst: &MsimInstance,
    bp: &BalancedPartitionResult,
    quotient: &Trigraph,
    ctx: &mut RecCtx<'_>,
) -> Result<(Vec<(usize, usize)>, Q, Q)> {
    let parts = bp.partition.parts();
    let black = quotient.views().black_graph;

    // heaviest prescribed cross edge per black quotient pair; pairs without
    // one stay out of the prescribed set entirely
    let mut representative: BTreeMap<(usize, usize), ((usize, usize), Q)> = BTreeMap::new();
    for (a, b) in black.black_edges() {
        let mut best: Option<((usize, usize), Q)> = None;
        for &u in &parts[a] {
            for &v in &parts[b] {
                if inst.graph.is_black(u, v) && inst.in_y(u, v) {
                    let w = inst.weight(u, v);
                    let key = (u.min(v), u.max(v));
                    let better = match &best {
                        None => true,
                        Some((bk, bw)) => w > *bw || (w == *bw && key < *bk),
                    };
                    if better {
                        best = Some((key, w));
                    }
                }
            }
        }
        if let Some(rep) = best {
            representative.insert((a, b), rep);
        }
    }

    let mut y = BTreeSet::new();
    let mut weights = BTreeMap::new();
    for (&e, &(_, w)) in &representative {
        y.insert(e);
        weights.insert(e, w);
    }
    let quot_inst = MsimInstance::new(black, Some(y), weights)?;
    let all_parts: Vec<usize> = (0..parts.len()).collect();
    let matrix = bp.conform_for_parts(&all_parts);
    let (selected, _, r_quot) = ctx.recurse(&MsimAdapter, &quot_inst, matrix)?;
    if selected.is_empty() {
        return Ok((Vec::new(), q(0), r_quot));
    }

    // conflict graph: selected quotient edges joined by a red edge between
    // their endpoint parts
    let s = selected.len();
    let mut conflict_edges = Vec::new();
    for i in 0..s {
        for j in i + 1..s {
            let (a1, b1) = selected[i];
            let (a2, b2) = selected[j];
            let red_link = [a1, b1]
                .iter()
                .any(|&x| [a2, b2].iter().any(|&y| quotient.edge(x, y) == EdgeKind::Red));
            if red_link {
                conflict_edges.push((i, j));
            }
        }
    }
    let conflict = Trigraph::from_edges(s, &conflict_edges, &[])?;
    let classes = color_classes(&greedy_coloring_degeneracy(&conflict));
    let c_eff = classes.len().max(1);

    let mut best: (Vec<(usize, usize)>, Q) = (Vec::new(), q(0));
    for class in &classes {
        let lifted: Vec<(usize, usize)> = class
            .iter()
            .map(|&i| representative[&selected[i]].0)
            .collect();
        let value = inst.value_of(&lifted);
        if value > best.1 {
            best = (lifted, value);
        }
    }
    Ok((best.0, best.1, q(c_eff as i64) * r_quot))
}

/// Solve max subset induced matching under the configured regime.
pub fn msim_approx(
    inst: &MsimInstance,
    src: &BalanceSource<'_>,
    cfg: &TradeoffConfig,
) -> Result<ApproxResult<Vec<(usize, usize)>>> {
    drive(&MsimAdapter, inst, src, cfg)
}
