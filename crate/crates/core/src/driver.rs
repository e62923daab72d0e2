//! Generic time-approximation trade-off engine.
//!
//! `drive` dispatches an instance either to the exact oracle (base case:
//! depth budget exhausted or instance below the size threshold, certified
//! bound 1) or to the problem's decomposition, which recurses on
//! subinstances carrying conform matrices from the balance engine and
//! composes the certified ratio bound from the achieved per-level
//! quantities. Oracles are budgeted; exceeding a budget is an error, never
//! a silent approximation, so a returned certificate is always honest.

use crate::balance::{
    balanced_partition, finest_conform_matrix, BalanceParams, BalanceSource,
    BalancedPartitionResult, NeatlyDividedMatrix,
};
use crate::error::{Error, Result};
use crate::io::TraceReport;
use crate::oracles::{OracleBudget, OracleCaps};
use crate::trigraph::Trigraph;
use crate::{q, Q};
use std::time::Instant;

/// Depth-selection regime.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Regime {
    Exact,
    Fixed(u32),
    Epsilon(f64),
    Log,
}

impl Regime {
    /// Parse `exact | q=<k> | eps=<x> | log`.
    pub fn parse(s: &str) -> Result<Regime> {
        if s == "exact" {
            return Ok(Regime::Exact);
        }
        if s == "log" {
            return Ok(Regime::Log);
        }
        if let Some(k) = s.strip_prefix("q=") {
            return k
                .parse()
                .map(Regime::Fixed)
                .map_err(|_| Error::invalid(format!("bad depth '{k}'")));
        }
        if let Some(x) = s.strip_prefix("eps=") {
            let eps: f64 = x.parse().map_err(|_| Error::invalid(format!("bad epsilon '{x}'")))?;
            if eps <= 0.0 {
                return Err(Error::invalid("epsilon must be positive"));
            }
            return Ok(Regime::Epsilon(eps));
        }
        Err(Error::invalid(format!("unknown regime '{s}'")))
    }
}

/// Shared configuration for a solver run.
#[derive(Debug, Clone)]
pub struct TradeoffConfig {
    pub regime: Regime,
    pub threshold: usize,
    pub budget: OracleBudget,
    pub caps: OracleCaps,
    pub balance: BalanceParams,
    /// Component-size parameter for the clustered-coloring variant.
    pub cluster_cap: usize,
    /// Node budget for the exhaustive clustered-coloring search.
    pub cluster_budget: u64,
    pub seed: u64,
}

impl Default for TradeoffConfig {
    fn default() -> Self {
        TradeoffConfig {
            regime: Regime::Fixed(1),
            threshold: 8,
            budget: OracleBudget::default(),
            caps: OracleCaps::relaxed(),
            balance: BalanceParams::practical(0),
            cluster_cap: 3,
            cluster_budget: 2_000_000,
            seed: 0,
        }
    }
}

impl TradeoffConfig {
    /// Effective base-case threshold; decomposing below 4 vertices would
    /// produce a single-part partition and recurse on the same instance.
    pub fn threshold_eff(&self) -> usize {
        self.threshold.max(4)
    }
}

/// Recursion tree statistics; merged bottom-up, so concurrent evaluation of
/// sibling subcalls only needs a merge at the join point.
#[derive(Debug, Clone, Default)]
pub struct Trace {
    pub depth_budget: u32,
    pub calls: u64,
    pub oracle_calls: u64,
    pub max_oracle_n: usize,
    pub d_eff_levels: Vec<usize>,
    pub max_base_n_levels: Vec<usize>,
    pub calls_levels: Vec<u64>,
    /// Max observed subinstance growth: child size / sqrt(parent size).
    pub max_expansion: f64,
    pub fallbacks: u64,
    pub ms: u128,
}

impl Trace {
    fn record_call(&mut self, level: usize) {
        self.calls += 1;
        if self.calls_levels.len() <= level {
            self.calls_levels.resize(level + 1, 0);
        }
        self.calls_levels[level] += 1;
    }

    fn record_oracle(&mut self, level: usize, n: usize) {
        self.oracle_calls += 1;
        self.max_oracle_n = self.max_oracle_n.max(n);
        if self.max_base_n_levels.len() <= level {
            self.max_base_n_levels.resize(level + 1, 0);
        }
        self.max_base_n_levels[level] = self.max_base_n_levels[level].max(n);
    }

    fn record_d_eff(&mut self, level: usize, d_eff: usize) {
        if self.d_eff_levels.len() <= level {
            self.d_eff_levels.resize(level + 1, 0);
        }
        self.d_eff_levels[level] = self.d_eff_levels[level].max(d_eff);
    }

    pub fn report(&self) -> TraceReport {
        TraceReport {
            depth: self.depth_budget,
            calls: self.calls,
            oracle_calls: self.oracle_calls,
            max_oracle_n: self.max_oracle_n,
            d_eff_levels: self.d_eff_levels.clone(),
            max_base_n_levels: self.max_base_n_levels.clone(),
            calls_levels: self.calls_levels.clone(),
            max_expansion: self.max_expansion,
            fallbacks: self.fallbacks,
            ms: self.ms,
        }
    }
}

/// Feasible solution, objective value, certified ratio bound and the
/// recursion trace.
#[derive(Debug, Clone)]
pub struct ApproxResult<S> {
    pub solution: S,
    pub value: Q,
    pub certified_bound: Q,
    pub trace: Trace,
}

/// Largest admissible recursion depth for the regime.
///
/// `per_level_factor` is the certified factor one level contributes (for
/// instance `d_eff + 1`): exact gives 0, fixed gives q as-is, the epsilon
/// regime picks the largest q with `F^(2^q - 1) <= n^eps`, the log regime
/// the largest q with `F^(2^q - 1) <= log2 n`. A factor of 1 leaves the
/// ratio untouched at any depth, so those regimes clamp at ceil(log log n).
pub fn choose_depth(n: usize, regime: &Regime, per_level_factor: f64) -> u32 {
    let cap = depth_cap(n);
    match regime {
        Regime::Exact => 0,
        Regime::Fixed(k) => *k,
        Regime::Epsilon(eps) => {
            let budget = eps * (n.max(2) as f64).ln();
            largest_depth(per_level_factor, budget, cap)
        }
        Regime::Log => {
            let log2n = (n.max(2) as f64).log2();
            largest_depth(per_level_factor, log2n.max(1.0).ln(), cap)
        }
    }
}

fn depth_cap(n: usize) -> u32 {
    if n < 4 {
        return 0;
    }
    let ll = (n as f64).log2().log2();
    ll.ceil().max(0.0) as u32
}

/// Largest q with (2^q - 1) * ln F <= budget; clamped to `cap`.
fn largest_depth(factor: f64, budget: f64, cap: u32) -> u32 {
    let lnf = factor.max(1.0).ln();
    if lnf == 0.0 {
        return cap;
    }
    let mut best = 0;
    for qd in 0..=cap {
        let exponent = (2f64.powi(qd as i32)) - 1.0;
        if exponent * lnf <= budget {
            best = qd;
        }
    }
    best
}

/// A problem plugged into the trade-off engine.
pub trait Adapter {
    type Inst;
    type Sol: Clone;

    fn name(&self) -> &'static str;
    fn size(&self, inst: &Self::Inst) -> usize;
    fn graph<'i>(&self, inst: &'i Self::Inst) -> &'i Trigraph;
    fn minimizing(&self) -> bool {
        false
    }
    /// Certified factor one recursion level contributes, given the achieved
    /// quotient red degree. Only used for depth selection.
    fn per_level_factor(&self, d_eff: usize) -> f64;
    fn exact(&self, inst: &Self::Inst, cfg: &TradeoffConfig) -> Result<(Self::Sol, Q)>;
    /// Feasibility check plus independent re-evaluation of the claimed value.
    fn verify(&self, inst: &Self::Inst, sol: &Self::Sol, value: &Q) -> Result<()>;
    fn decompose(
        &self,
        inst: &Self::Inst,
        bp: &BalancedPartitionResult,
        ctx: &mut RecCtx<'_>,
    ) -> Result<(Self::Sol, Q, Q)>;
}

/// Per-call recursion context handed to `Adapter::decompose`.
pub struct RecCtx<'a> {
    pub cfg: &'a TradeoffConfig,
    pub depth: u32,
    pub level: usize,
    pub parent_n: usize,
    pub trace: &'a mut Trace,
}

impl RecCtx<'_> {
    /// Recursive call (same or another problem) one level deeper, carrying
    /// the subinstance's conform matrix.
    pub fn recurse<A: Adapter>(
        &mut self,
        adapter: &A,
        inst: &A::Inst,
        matrix: NeatlyDividedMatrix,
    ) -> Result<(A::Sol, Q, Q)> {
        let child_n = adapter.size(inst);
        if self.parent_n > 0 {
            let growth = child_n as f64 / (self.parent_n as f64).sqrt();
            if growth > self.trace.max_expansion {
                self.trace.max_expansion = growth;
            }
        }
        rec_call(adapter, inst, Src::Matrix(matrix), self.cfg, self.depth - 1, self.level + 1, self.trace)
    }
}

enum Src {
    None,
    Bp(Box<BalancedPartitionResult>),
    Matrix(NeatlyDividedMatrix),
}

fn rec_call<A: Adapter>(
    adapter: &A,
    inst: &A::Inst,
    src: Src,
    cfg: &TradeoffConfig,
    depth: u32,
    level: usize,
    trace: &mut Trace,
) -> Result<(A::Sol, Q, Q)> {
    trace.record_call(level);
    let n = adapter.size(inst);
    if depth == 0 || n <= cfg.threshold_eff() {
        let (sol, value) = adapter.exact(inst, cfg)?;
        trace.record_oracle(level, n);
        adapter.verify(inst, &sol, &value)?;
        return Ok((sol, value, q(1)));
    }
    let bp = match src {
        Src::None => return Err(Error::invalid("decomposition requested without a matrix")),
        Src::Bp(bp) => *bp,
        Src::Matrix(m) => {
            balanced_partition(adapter.graph(inst), &BalanceSource::Matrix(&m), &cfg.balance)?
        }
    };
    if !bp.balance_certified {
        trace.fallbacks += 1;
    }
    trace.record_d_eff(level, bp.achieved_red_degree);
    let mut ctx = RecCtx { cfg, depth, level, parent_n: n, trace };
    let (sol, value, bound) = adapter.decompose(inst, &bp, &mut ctx)?;
    adapter.verify(inst, &sol, &value)?;
    Ok((sol, value, bound.max(q(1))))
}

/// Entry point: choose the depth for the regime, then recurse.
pub fn drive<A: Adapter>(
    adapter: &A,
    inst: &A::Inst,
    src: &BalanceSource<'_>,
    cfg: &TradeoffConfig,
) -> Result<ApproxResult<A::Sol>> {
    let t0 = Instant::now();
    let mut trace = Trace::default();
    let n = adapter.size(inst);

    let (sol, value, bound) = if cfg.regime == Regime::Exact || n <= cfg.threshold_eff() {
        rec_call(adapter, inst, Src::None, cfg, 0, 0, &mut trace)?
    } else {
        let matrix = match src {
            BalanceSource::Sequence(seq) => finest_conform_matrix(adapter.graph(inst), seq)?,
            BalanceSource::Matrix(m) => (*m).clone(),
        };
        let bp = balanced_partition(adapter.graph(inst), &BalanceSource::Matrix(&matrix), &cfg.balance)?;
        let depth = choose_depth(n, &cfg.regime, adapter.per_level_factor(bp.achieved_red_degree));
        trace.depth_budget = depth;
        if depth == 0 {
            rec_call(adapter, inst, Src::Matrix(matrix), cfg, 0, 0, &mut trace)?
        } else {
            rec_call(adapter, inst, Src::Bp(Box::new(bp)), cfg, depth, 0, &mut trace)?
        }
    };

    trace.ms = t0.elapsed().as_millis();
    Ok(ApproxResult { solution: sol, value, certified_bound: bound, trace })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn regime_parsing() {
        assert_eq!(Regime::parse("exact").unwrap(), Regime::Exact);
        assert_eq!(Regime::parse("q=2").unwrap(), Regime::Fixed(2));
        assert_eq!(Regime::parse("log").unwrap(), Regime::Log);
        assert!(matches!(Regime::parse("eps=0.5").unwrap(), Regime::Epsilon(_)));
        assert!(Regime::parse("eps=-1").is_err());
        assert!(Regime::parse("zzz").is_err());
    }

    #[test]
    fn choose_depth_exact_and_fixed() {
        assert_eq!(choose_depth(100, &Regime::Exact, 5.0), 0);
        assert_eq!(choose_depth(100, &Regime::Fixed(3), 5.0), 3);
    }

    #[test]
    fn choose_depth_epsilon_example() {
        // n = 4096, eps = 0.5, F = 3: largest q with 3^(2^q - 1) <= 64 is 2
        assert_eq!(choose_depth(4096, &Regime::Epsilon(0.5), 3.0), 2);
    }

    #[test]
    fn choose_depth_factor_one_clamps() {
        // red degree 0 keeps the ratio at 1 for any depth; clamp at the cap
        let d = choose_depth(4096, &Regime::Epsilon(0.5), 1.0);
        assert_eq!(d, 4); // ceil(log2 log2 4096) = ceil(3.58)
        assert!(choose_depth(2, &Regime::Epsilon(0.5), 1.0) == 0);
    }

    #[test]
    fn choose_depth_log_regime() {
        // F = 2: largest q with 2^(2^q-1) <= log2(65536) = 16: q = 2 (2^3 = 8 <= 16, 2^7 > 16)
        assert_eq!(choose_depth(65536, &Regime::Log, 2.0), 2);
    }
}
