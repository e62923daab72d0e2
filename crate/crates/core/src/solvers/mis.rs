//! Weighted max independent set: the (d_eff+1)-class decomposition and its
//! clustered-coloring variant.
//!
//! One level works as follows: take the balanced partition P, solve each
//! part recursively, properly color the red graph of G/P, and for each color
//! class pack the part solutions by solving a weighted independent set on
//! the black quotient of the class (parts weighted by their sub-solution
//! values). The heaviest class wins. All cross-part edges inside a class are
//! complete or empty, so packing at the quotient level is lossless.

use crate::balance::{BalancedPartitionResult, BalanceSource};
use crate::coloring_util::{color_classes, components_within, greedy_coloring_degeneracy};
use crate::driver::{
    choose_depth, drive, Adapter, ApproxResult, RecCtx, Regime, TradeoffConfig, Trace,
};
use crate::error::{Error, Result};
use crate::feas::check_independent_set;
use crate::oracles::exact_mis;
use crate::trigraph::Trigraph;
use crate::{q, Q};

#[derive(Debug, Clone)]
pub struct WmisInstance {
    pub graph: Trigraph,
    pub weights: Vec<Q>,
}

impl WmisInstance {
    pub fn new(graph: Trigraph, weights: Vec<Q>) -> Result<Self> {
        if !graph.is_graph() {
            return Err(Error::invalid("weighted MIS expects a graph (no red edges)"));
        }
        if weights.len() != graph.n() {
            return Err(Error::invalid("weight vector length mismatch"));
        }
        Ok(WmisInstance { graph, weights })
    }

    pub fn unit(graph: Trigraph) -> Result<Self> {
        let n = graph.n();
        WmisInstance::new(graph, vec![q(1); n])
    }

    fn value_of(&self, set: &[usize]) -> Q {
        set.iter().map(|&v| self.weights[v]).sum()
    }
}

pub struct WmisAdapter;

impl Adapter for WmisAdapter {
    type Inst = WmisInstance;
    type Sol = Vec<usize>;

    fn name(&self) -> &'static str {
        "mis"
    }

    fn size(&self, inst: &WmisInstance) -> usize {
        inst.graph.n()
    }

    fn graph<'i>(&self, inst: &'i WmisInstance) -> &'i Trigraph {
        &inst.graph
    }

    fn per_level_factor(&self, d_eff: usize) -> f64 {
        (d_eff + 1) as f64
    }

    fn exact(&self, inst: &WmisInstance, cfg: &TradeoffConfig) -> Result<(Vec<usize>, Q)> {
        exact_mis(&inst.graph, &inst.weights, &cfg.budget, &cfg.caps)
    }

    fn verify(&self, inst: &WmisInstance, sol: &Vec<usize>, value: &Q) -> Result<()> {
        check_independent_set(&inst.graph, sol)?;
        if inst.value_of(sol) != *value {
            return Err(Error::Contract("reported value does not match the solution".into()));
        }
        Ok(())
    }

    fn decompose(
        &self,
        inst: &WmisInstance,
        bp: &BalancedPartitionResult,
        ctx: &mut RecCtx<'_>,
    ) -> Result<(Vec<usize>, Q, Q)> {
        let parts = bp.partition.parts();

        // per-part sub-solutions, mapped back to original vertex ids
        let mut part_sets: Vec<Vec<usize>> = Vec::with_capacity(parts.len());
        let mut part_values: Vec<Q> = Vec::with_capacity(parts.len());
        let mut r_parts = q(1);
        for part in parts {
            let (sub, map) = inst.graph.induced(part)?;
            let sub_inst =
                WmisInstance::new(sub, part.iter().map(|&v| inst.weights[v]).collect())?;
            let matrix = bp.conform_for_vertices(part);
            let (sol, value, bound) = ctx.recurse(&WmisAdapter, &sub_inst, matrix)?;
            part_sets.push(sol.into_iter().map(|i| map[i]).collect());
            part_values.push(value);
            r_parts = r_parts.max(bound);
        }

        let quotient = inst.graph.quotient(&bp.partition)?;
        let red = quotient.views().red_graph;
        let classes = color_classes(&greedy_coloring_degeneracy(&red));
        let k_eff = classes.len().max(1);

        let mut best: Option<(Vec<usize>, Q)> = None;
        let mut r_quot = q(1);
        for class in &classes {
            let (class_graph, _) = quotient.induced(class)?;
            if !class_graph.is_graph() {
                return Err(Error::Contract("red edge inside a color class".into()));
            }
            let class_inst = WmisInstance::new(
                class_graph,
                class.iter().map(|&p| part_values[p]).collect(),
            )?;
            let matrix = bp.conform_for_parts(class);
            let (picked, _, bound) = ctx.recurse(&WmisAdapter, &class_inst, matrix)?;
            r_quot = r_quot.max(bound);
            let mut union: Vec<usize> = Vec::new();
            for &local in &picked {
                union.extend(&part_sets[class[local]]);
            }
            union.sort_unstable();
            let value = inst.value_of(&union);
            if best.as_ref().map_or(true, |(_, bv)| value > *bv) {
                best = Some((union, value));
            }
        }
        let (solution, value) = best.unwrap_or((Vec::new(), q(0)));
        let bound = q(k_eff as i64) * r_parts * r_quot;
        Ok((solution, value, bound))
    }
}

/// Solve WMIS under the configured regime.
pub fn wmis_approx(
    inst: &WmisInstance,
    src: &BalanceSource<'_>,
    cfg: &TradeoffConfig,
) -> Result<ApproxResult<Vec<usize>>> {
    drive(&WmisAdapter, inst, src, cfg)
}

/// Clustered-coloring variant: color the red quotient with
/// `ceil((d_eff+2)/3)` colors allowing monochromatic components of up to
/// `cluster_cap` parts (found by exhaustive search within a node budget),
/// then solve every subset of every component and combine per class by
/// subset search. Falls back to the proper-coloring decomposition when no
/// clustered coloring is found in budget.
pub fn wmis_clustered(
    inst: &WmisInstance,
    src: &BalanceSource<'_>,
    cfg: &TradeoffConfig,
) -> Result<ApproxResult<Vec<usize>>> {
    let n = inst.graph.n();
    if cfg.regime == Regime::Exact || n <= cfg.threshold_eff() {
        return drive(&WmisAdapter, inst, src, cfg);
    }
    let matrix = match src {
        BalanceSource::Sequence(seq) => {
            crate::balance::finest_conform_matrix(&inst.graph, seq)?
        }
        BalanceSource::Matrix(m) => (*m).clone(),
    };
    let bp = crate::balance::balanced_partition(
        &inst.graph,
        &BalanceSource::Matrix(&matrix),
        &cfg.balance,
    )?;
    let d_eff = bp.achieved_red_degree;
    let depth = choose_depth(n, &cfg.regime, (d_eff + 1) as f64).max(1);

    let mut trace = Trace::default();
    trace.depth_budget = depth;
    trace.calls = 1;
    trace.calls_levels = vec![1];
    let t0 = std::time::Instant::now();

    let quotient = inst.graph.quotient(&bp.partition)?;
    let red = quotient.views().red_graph;
    let k = (d_eff + 2).div_ceil(3);
    let coloring = clustered_coloring_search(&red, k, cfg.cluster_cap, cfg.cluster_budget);

    let Some(colors) = coloring else {
        // no clustered coloring within budget: fall back, flagged
        let mut out = drive(&WmisAdapter, inst, src, cfg)?;
        out.trace.fallbacks += 1;
        return Ok(out);
    };

    let classes = color_classes(&colors);
    // the per-class combination search is exponential in the component
    // count; bail out to the proper-coloring path when it cannot fit the
    // budget
    let worst_combo: f64 = classes
        .iter()
        .map(|class| {
            let comps = components_within(&red, class);
            comps.iter().map(|c| (1u64 << c.len()) as f64).product::<f64>()
        })
        .fold(1.0, f64::max);
    if worst_combo > cfg.cluster_budget as f64 {
        let mut out = drive(&WmisAdapter, inst, src, cfg)?;
        out.trace.fallbacks += 1;
        return Ok(out);
    }
    let mut ctx = RecCtx { cfg, depth, level: 0, parent_n: n, trace: &mut trace };
    let mut best: Option<(Vec<usize>, Q)> = None;
    let mut r_max = q(1);
    for class in &classes {
        if class.is_empty() {
            continue;
        }
        let comps = components_within(&red, class);
        // candidate (chosen parts, set, value) lists per component
        let mut comp_choices: Vec<Vec<(Vec<usize>, Vec<usize>, Q)>> = Vec::new();
        for comp in &comps {
            let mut choices = vec![(Vec::new(), Vec::new(), q(0))];
            for mask in 1u32..(1 << comp.len()) {
                let chosen: Vec<usize> = (0..comp.len())
                    .filter(|i| mask >> i & 1 == 1)
                    .map(|i| comp[i])
                    .collect();
                let union: Vec<usize> = {
                    let mut u: Vec<usize> = chosen
                        .iter()
                        .flat_map(|&p| bp.partition.parts()[p].iter().copied())
                        .collect();
                    u.sort_unstable();
                    u
                };
                let (sub, map) = inst.graph.induced(&union)?;
                let sub_inst = WmisInstance::new(
                    sub,
                    union.iter().map(|&v| inst.weights[v]).collect(),
                )?;
                let mtx = bp.conform_for_vertices(&union);
                let (sol, value, bound) = ctx.recurse(&WmisAdapter, &sub_inst, mtx)?;
                r_max = r_max.max(bound);
                let set: Vec<usize> = sol.into_iter().map(|i| map[i]).collect();
                choices.push((chosen, set, value));
            }
            comp_choices.push(choices);
        }
        // exhaustive combination over component choices; black-compatible
        // declared part sets compose into one independent set
        let mut best_class: (Vec<usize>, Q) = (Vec::new(), q(0));
        let mut stack_parts: Vec<Vec<usize>> = Vec::new();
        let mut stack_sets: Vec<Vec<usize>> = Vec::new();
        combine_components(
            &quotient,
            &comp_choices,
            0,
            &mut stack_parts,
            &mut stack_sets,
            q(0),
            &mut best_class,
        );
        let value = best_class.1;
        if best.as_ref().map_or(true, |(_, bv)| value > *bv) {
            let mut set = best_class.0;
            set.sort_unstable();
            best = Some((set, value));
        }
    }

    let (solution, value) = best.unwrap_or((Vec::new(), q(0)));
    check_independent_set(&inst.graph, &solution)?;
    if inst.value_of(&solution) != value {
        return Err(Error::Contract("clustered value mismatch".into()));
    }
    trace.ms = t0.elapsed().as_millis();
    let bound = (q(k as i64) * r_max * r_max).max(q(1));
    Ok(ApproxResult { solution, value, certified_bound: bound, trace })
}

fn combine_components(
    quotient: &Trigraph,
    comp_choices: &[Vec<(Vec<usize>, Vec<usize>, Q)>],
    idx: usize,
    stack_parts: &mut Vec<Vec<usize>>,
    stack_sets: &mut Vec<Vec<usize>>,
    value: Q,
    best: &mut (Vec<usize>, Q),
) {
    if idx == comp_choices.len() {
        if value > best.1 {
            let set: Vec<usize> = stack_sets.iter().flatten().copied().collect();
            *best = (set, value);
        }
        return;
    }
    'choice: for (parts, set, v) in &comp_choices[idx] {
        for earlier in stack_parts.iter() {
            for &a in earlier {
                for &b in parts {
                    if quotient.is_black(a, b) {
                        continue 'choice;
                    }
                }
            }
        }
        stack_parts.push(parts.clone());
        stack_sets.push(set.clone());
        combine_components(quotient, comp_choices, idx + 1, stack_parts, stack_sets, value + *v, best);
        stack_parts.pop();
        stack_sets.pop();
    }
}

/// Exhaustive search for a k-coloring of `red` whose monochromatic
/// components have at most `cap` vertices; deterministic first hit.
fn clustered_coloring_search(red: &Trigraph, k: usize, cap: usize, budget: u64) -> Option<Vec<usize>> {
    let n = red.n();
    let mut colors = vec![usize::MAX; n];
    let mut nodes = 0u64;
    fn ok_so_far(red: &Trigraph, colors: &[usize], v: usize, cap: usize) -> bool {
        // component of v within its color among assigned vertices
        let c = colors[v];
        let mut seen = std::collections::BTreeSet::new();
        let mut stack = vec![v];
        seen.insert(v);
        while let Some(x) = stack.pop() {
            if seen.len() > cap {
                return false;
            }
            for (z, _) in red.neighbors(x) {
                if colors[z] == c && seen.insert(z) {
                    stack.push(z);
                }
            }
        }
        true
    }
    fn go(
        red: &Trigraph,
        colors: &mut Vec<usize>,
        v: usize,
        k: usize,
        cap: usize,
        nodes: &mut u64,
        budget: u64,
    ) -> bool {
        if v == colors.len() {
            return true;
        }
        for c in 0..k {
            *nodes += 1;
            if *nodes > budget {
                return false;
            }
            colors[v] = c;
            if ok_so_far(red, colors, v, cap) && go(red, colors, v + 1, k, cap, nodes, budget) {
                return true;
            }
            colors[v] = usize::MAX;
        }
        false
    }
    go(red, &mut colors, 0, k, cap, &mut nodes, budget).then_some(colors)
}
