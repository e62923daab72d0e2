//! Set coloring: assign at least b(v) colors to every vertex with disjoint
//! palettes across edges, minimizing the total number of colors.
//!
//! One level: solve each part recursively, record the per-part color count
//! b'(P_i), properly color the red quotient, solve a set-coloring instance
//! on each class's black quotient with demands b', and lift the class
//! solutions through per-part bijections. Classes get globally disjoint
//! palettes by offsetting color ids.

use crate::balance::BalancedPartitionResult;
use crate::balance::BalanceSource;
use crate::coloring_util::{color_classes, greedy_coloring_degeneracy};
use crate::driver::{drive, Adapter, ApproxResult, RecCtx, TradeoffConfig};
use crate::error::{Error, Result};
use crate::feas::{check_set_coloring, palette_size};
use crate::oracles::exact_set_coloring;
use crate::trigraph::Trigraph;
use crate::{q, Q};
use std::collections::BTreeMap;

#[derive(Debug, Clone)]
pub struct SetColoringInstance {
    pub graph: Trigraph,
    pub demands: Vec<u32>,
}

impl SetColoringInstance {
    pub fn new(graph: Trigraph, demands: Vec<u32>) -> Result<Self> {
        if !graph.is_graph() {
            return Err(Error::invalid("set coloring expects a graph"));
        }
        if demands.len() != graph.n() || demands.iter().any(|&b| b == 0) {
            return Err(Error::invalid("demands must be positive, one per vertex"));
        }
        Ok(SetColoringInstance { graph, demands })
    }

    pub fn proper(graph: Trigraph) -> Result<Self> {
        let n = graph.n();
        SetColoringInstance::new(graph, vec![1; n])
    }
}

/// Palette assignment per vertex; colors are positive integers.
pub type Palettes = Vec<Vec<u32>>;

pub struct SetColoringAdapter;

impl Adapter for SetColoringAdapter {
    type Inst = SetColoringInstance;
    type Sol = Palettes;

    fn name(&self) -> &'static str {
        "setcol"
    }

    fn size(&self, inst: &SetColoringInstance) -> usize {
        inst.graph.n()
    }

    fn graph<'i>(&self, inst: &'i SetColoringInstance) -> &'i Trigraph {
        &inst.graph
    }

    fn minimizing(&self) -> bool {
        true
    }

    fn per_level_factor(&self, d_eff: usize) -> f64 {
        (d_eff + 1) as f64
    }

    fn exact(&self, inst: &SetColoringInstance, cfg: &TradeoffConfig) -> Result<(Palettes, Q)> {
        let (palettes, k) = exact_set_coloring(&inst.graph, &inst.demands, &cfg.budget, &cfg.caps)?;
        Ok((palettes, q(k as i64)))
    }

    fn verify(&self, inst: &SetColoringInstance, sol: &Palettes, value: &Q) -> Result<()> {
        check_set_coloring(&inst.graph, &inst.demands, sol)?;
        if q(palette_size(sol) as i64) != *value {
            return Err(Error::Contract("reported color count does not match".into()));
        }
        Ok(())
    }

    fn decompose(
        &self,
        inst: &SetColoringInstance,
        bp: &BalancedPartitionResult,
        ctx: &mut RecCtx<'_>,
    ) -> Result<(Palettes, Q, Q)> {
        let parts = bp.partition.parts();

        let mut part_palettes: Vec<Palettes> = Vec::with_capacity(parts.len());
        let mut derived_demands: Vec<u32> = Vec::with_capacity(parts.len());
        let mut r_parts = q(1);
        for part in parts {
            let (sub, _) = inst.graph.induced(part)?;
            let sub_inst =
                SetColoringInstance::new(sub, part.iter().map(|&v| inst.demands[v]).collect())?;
            let matrix = bp.conform_for_vertices(part);
            let (palettes, _, bound) = ctx.recurse(&SetColoringAdapter, &sub_inst, matrix)?;
            r_parts = r_parts.max(bound);
            derived_demands.push(palette_size(&palettes) as u32);
            part_palettes.push(palettes);
        }

        let quotient = inst.graph.quotient(&bp.partition)?;
        let red = quotient.views().red_graph;
        let classes = color_classes(&greedy_coloring_degeneracy(&red));
        let k_eff = classes.len().max(1);

        let mut out: Palettes = vec![Vec::new(); inst.graph.n()];
        let mut offset = 0u32;
        let mut r_quot = q(1);
        for class in &classes {
            let (class_graph, _) = quotient.induced(class)?;
            if !class_graph.is_graph() {
                return Err(Error::Contract("red edge inside a color class".into()));
            }
            let demands: Vec<u32> = class.iter().map(|&p| derived_demands[p].max(1)).collect();
            let class_inst = SetColoringInstance::new(class_graph, demands)?;
            let matrix = bp.conform_for_parts(class);
            let (class_palettes, _, bound) =
                ctx.recurse(&SetColoringAdapter, &class_inst, matrix)?;
            r_quot = r_quot.max(bound);

            let lifted = lift_coloring(
                &class_palettes,
                &class.iter().map(|&p| part_palettes[p].clone()).collect::<Vec<_>>(),
            )?;
            // write back with a global per-class offset
            let class_colors: Vec<u32> = {
                let mut cs: Vec<u32> = lifted.iter().flatten().flatten().copied().collect();
                cs.sort_unstable();
                cs.dedup();
                cs
            };
            let remap: BTreeMap<u32, u32> = class_colors
                .iter()
                .enumerate()
                .map(|(i, &c)| (c, offset + 1 + i as u32))
                .collect();
            offset += class_colors.len() as u32;
            for (ci, &p) in class.iter().enumerate() {
                for (vi, &v) in parts[p].iter().enumerate() {
                    out[v] = lifted[ci][vi].iter().map(|c| remap[c]).collect();
                }
            }
        }

        let value = q(palette_size(&out) as i64);
        let bound = q(k_eff as i64) * r_parts * r_quot;
        Ok((out, value, bound))
    }
}

/// Lift a quotient-level palette through the per-part local palettes: part
/// `i`'s local color ranks map bijectively into `class_palettes[i]`.
/// Requires every quotient palette to be at least as large as the number of
/// distinct local colors.
pub fn lift_coloring(
    class_palettes: &Palettes,
    local_palettes: &[Palettes],
) -> Result<Vec<Palettes>> {
    if class_palettes.len() != local_palettes.len() {
        return Err(Error::Contract("palette count mismatch in lift".into()));
    }
    let mut out = Vec::with_capacity(local_palettes.len());
    for (quot, local) in class_palettes.iter().zip(local_palettes) {
        let mut used: Vec<u32> = local.iter().flatten().copied().collect();
        used.sort_unstable();
        used.dedup();
        if quot.len() < used.len() {
            return Err(Error::Contract(format!(
                "quotient palette of size {} cannot host {} local colors",
                quot.len(),
                used.len()
            )));
        }
        let mut sorted_quot = quot.clone();
        sorted_quot.sort_unstable();
        let tau: BTreeMap<u32, u32> =
            used.iter().enumerate().map(|(i, &c)| (c, sorted_quot[i])).collect();
        out.push(
            local
                .iter()
                .map(|palette| palette.iter().map(|c| tau[c]).collect())
                .collect(),
        );
    }
    Ok(out)
}

/// Solve set coloring under the configured regime.
pub fn set_coloring_approx(
    inst: &SetColoringInstance,
    src: &BalanceSource<'_>,
    cfg: &TradeoffConfig,
) -> Result<ApproxResult<Palettes>> {
    drive(&SetColoringAdapter, inst, src, cfg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::driver::Regime;
    use crate::instances::{gen_by_uncontraction, gen_figure1};
    use crate::oracles::{OracleBudget, OracleCaps};

    fn cfg_q(qd: u32) -> TradeoffConfig {
        TradeoffConfig { regime: Regime::Fixed(qd), ..TradeoffConfig::default() }
    }

    #[test]
    fn edgeless_needs_one_color() {
        let (g, seq) = crate::instances::gen_cograph(6, 11).unwrap();
        let edgeless = Trigraph::new(6);
        let _ = g;
        let inst = SetColoringInstance::proper(edgeless).unwrap();
        let out = set_coloring_approx(&inst, &BalanceSource::Sequence(&seq), &cfg_q(1)).unwrap();
        assert_eq!(out.value, q(1));
    }

    #[test]
    fn clique_needs_n_colors() {
        let n = 10;
        let edges: Vec<(usize, usize)> =
            (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
        let g = Trigraph::from_edges(n, &edges, &[]).unwrap();
        let mut steps = Vec::new();
        let mut prev = 0;
        for k in 0..n - 1 {
            steps.push(crate::contraction::ContractionStep {
                u: prev,
                v: if k == 0 { 1 } else { k + 1 },
                merged: n + k,
            });
            prev = n + k;
        }
        let seq = crate::contraction::ContractionSequence::new(n, steps).unwrap();
        let inst = SetColoringInstance::proper(g).unwrap();
        let out = set_coloring_approx(&inst, &BalanceSource::Sequence(&seq), &cfg_q(1)).unwrap();
        assert_eq!(out.value, q(n as i64));
    }

    #[test]
    fn figure1_feasible_and_bounded() {
        let (g, seq) = gen_figure1();
        let inst = SetColoringInstance::proper(g.clone()).unwrap();
        let out = set_coloring_approx(&inst, &BalanceSource::Sequence(&seq), &cfg_q(1)).unwrap();
        let (_, chi) =
            exact_set_coloring(&g, &inst.demands, &OracleBudget::default(), &OracleCaps::default())
                .unwrap();
        assert_eq!(chi, 4);
        assert!(out.value >= q(4));
        assert!(out.value / q(chi as i64) <= out.certified_bound);
    }

    #[test]
    fn lift_single_part_identity() {
        let local = vec![vec![vec![1, 2], vec![3]]];
        let quot = vec![vec![1, 2, 3]];
        let lifted = lift_coloring(&quot, &local).unwrap();
        assert_eq!(lifted[0], vec![vec![1, 2], vec![3]]);
    }

    #[test]
    fn lift_rejects_small_palette() {
        let local = vec![vec![vec![1, 2], vec![3]]];
        let quot = vec![vec![7, 9]];
        assert!(lift_coloring(&quot, &local).is_err());
    }

    #[test]
    fn lift_feasibility_checked_edge_by_edge() {
        // two adjacent parts with disjoint quotient palettes of sizes 2 and 3
        let quot = vec![vec![10, 20], vec![30, 40, 50]];
        let local = vec![
            vec![vec![1], vec![2]],          // part 0 has two vertices
            vec![vec![1, 2], vec![3]],       // part 1 has two vertices
        ];
        let lifted = lift_coloring(&quot, &local).unwrap();
        let all0: Vec<u32> = lifted[0].iter().flatten().copied().collect();
        let all1: Vec<u32> = lifted[1].iter().flatten().copied().collect();
        assert!(all0.iter().all(|c| !all1.contains(c)));
    }

    #[test]
    fn certificate_sound_on_generated_instances() {
        for seed in 0..6u64 {
            let (g, seq) = gen_by_uncontraction(13, 2, seed).unwrap();
            let inst = SetColoringInstance::proper(g.clone()).unwrap();
            for qd in [1, 2] {
                let out =
                    set_coloring_approx(&inst, &BalanceSource::Sequence(&seq), &cfg_q(qd)).unwrap();
                let (_, chi) = exact_set_coloring(
                    &g,
                    &inst.demands,
                    &OracleBudget::default(),
                    &OracleCaps::relaxed(),
                )
                .unwrap();
                assert!(
                    out.value / q(chi as i64) <= out.certified_bound,
                    "seed {seed} q {qd}: {} vs {}",
                    out.value,
                    out.certified_bound
                );
            }
        }
    }

    #[test]
    fn claim_quotient_demands_lower_bound() {
        // chi_Gamma(H_j) <= chi_{b_j}(G_j) on solver-shaped subinstances
        let budget = OracleBudget::default();
        let caps = OracleCaps::relaxed();
        for seed in [1u64, 3] {
            let (g, seq) = gen_by_uncontraction(10, 2, seed).unwrap();
            let bp = crate::balance::balanced_partition(
                &g,
                &BalanceSource::Sequence(&seq),
                &crate::balance::BalanceParams::practical(2),
            )
            .unwrap();
            let quotient = g.quotient(&bp.partition).unwrap();
            let red = quotient.views().red_graph;
            for class in color_classes(&greedy_coloring_degeneracy(&red)) {
                let (class_graph, _) = quotient.induced(&class).unwrap();
                if !class_graph.is_graph() || class_graph.n() == 0 {
                    continue;
                }
                // Gamma: exact per-part color counts; G_j: union subgraph
                let mut gamma = Vec::new();
                let mut union = Vec::new();
                for &p in &class {
                    let part = &bp.partition.parts()[p];
                    let (sub, _) = g.induced(part).unwrap();
                    let (_, chi) =
                        exact_set_coloring(&sub, &vec![1; sub.n()], &budget, &caps).unwrap();
                    gamma.push(chi.max(1));
                    union.extend(part.iter().copied());
                }
                union.sort_unstable();
                let (gj, _) = g.induced(&union).unwrap();
                let (_, chi_gj) = exact_set_coloring(&gj, &vec![1; gj.n()], &budget, &caps).unwrap();
                let (_, chi_hj) = exact_set_coloring(&class_graph, &gamma, &budget, &caps).unwrap();
                assert!(chi_hj <= chi_gj, "seed {seed}: {chi_hj} > {chi_gj}");
            }
        }
    }
}
