//! Command-line surface: verify, partition, solve, oracle, check, gen and
//! bench over the graph/sequence text formats.
//!
//! Exit codes: 0 success, 2 input error, 3 budget error, 4 certificate
//! violation. Failures print machine-readable JSON on stderr.

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use std::collections::BTreeSet;
use std::path::{Path, PathBuf};
use tww_core::balance::{BalanceParams, BalanceSource};
use tww_core::contraction::{verify_sequence, ContractionSequence};
use tww_core::driver::{ApproxResult, Regime, TradeoffConfig};
use tww_core::error::Error;
use tww_core::instances;
use tww_core::io::{
    format_rational, parse_graph_file, parse_sequence_file, write_graph_file,
    write_sequence_file, GraphFile, Report,
};
use tww_core::oracles::{self, OracleBudget, OracleCaps};
use tww_core::solvers::coloring::{set_coloring_approx, SetColoringInstance};
use tww_core::solvers::matching::{msim_approx, MsimInstance};
use tww_core::solvers::mis::{wmis_approx, wmis_clustered, WmisInstance};
use tww_core::solvers::packing::{
    aihp_approx, mief_approx, mlisf_approx, AihpInstance, Star, StarForestInstance, TupleWeights,
};
use tww_core::{q, Q};

#[derive(Parser)]
#[command(name = "tww", about = "Approximation solvers with certified bounds for graphs given with a contraction d-sequence", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, ValueEnum)]
enum Problem {
    Mis,
    Setcol,
    Msim,
    Mlisf,
    Mief,
    Aihp,
}

impl Problem {
    fn name(self) -> &'static str {
        match self {
            Problem::Mis => "mis",
            Problem::Setcol => "setcol",
            Problem::Msim => "msim",
            Problem::Mlisf => "mlisf",
            Problem::Mief => "mief",
            Problem::Aihp => "aihp",
        }
    }
}

#[derive(Args, Clone)]
struct SolveArgs {
    #[arg(long, value_enum)]
    problem: Problem,
    /// Graph file (tgf format)
    graph: PathBuf,
    /// Contraction sequence file
    seq: PathBuf,
    /// Pattern graph file (aihp only)
    #[arg(long)]
    pattern: Option<PathBuf>,
    /// Prescribed edge set file (lines `y u v`); absent means Y = E
    #[arg(long)]
    y: Option<PathBuf>,
    /// exact | q=<k> | eps=<x> | log
    #[arg(long, default_value = "q=1")]
    regime: String,
    /// Base-case size threshold
    #[arg(long, default_value_t = 8)]
    threshold: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// theoretical | practical | mv=<k>,ps=<k>
    #[arg(long, default_value = "practical")]
    caps: String,
    /// Use the clustered-coloring variant (mis only)
    #[arg(long, default_value_t = false)]
    clustered: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Replay a contraction sequence and report its width
    Verify { graph: PathBuf, seq: PathBuf },
    /// Compute the balanced partition and report its achieved constants
    Partition {
        graph: PathBuf,
        seq: PathBuf,
        #[arg(long, default_value = "practical")]
        caps: String,
        #[arg(long, default_value_t = false)]
        trace_balance: bool,
    },
    /// Solve a problem with a certified approximation bound
    Solve(SolveArgs),
    /// Run the exact oracle
    Oracle {
        #[arg(long, value_enum)]
        problem: Problem,
        graph: PathBuf,
        #[arg(long)]
        pattern: Option<PathBuf>,
        #[arg(long)]
        y: Option<PathBuf>,
    },
    /// Solve and compare against the oracle; exit 4 when the realized ratio
    /// exceeds the certified bound
    Check(SolveArgs),
    /// Generate an instance (graph + certified sequence)
    Gen {
        #[arg(long)]
        family: String,
        #[arg(long, default_value_t = 16)]
        n: usize,
        #[arg(long, default_value_t = 2)]
        d: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
        /// Input graph (family `greedy` sequences an existing graph)
        #[arg(long = "in")]
        input: Option<PathBuf>,
    },
    /// Batch runs over a manifest; CSV rows on stdout or --out
    Bench {
        #[arg(long)]
        manifest: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value = "q=1")]
        regime: String,
        #[arg(long, default_value_t = 8)]
        threshold: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn main() {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => std::process::exit(code),
        Err(e) => {
            let payload = json!({
                "error": match &e {
                    Error::BudgetExceeded { .. } => "budget",
                    Error::Certificate(_) => "certificate",
                    _ => "input",
                },
                "message": e.to_string(),
            });
            eprintln!("{payload}");
            std::process::exit(e.exit_code());
        }
    }
}

fn read_graph(path: &Path) -> Result<GraphFile, Error> {
    let text = std::fs::read_to_string(path)?;
    parse_graph_file(&text)
}

fn read_seq(path: &Path) -> Result<ContractionSequence, Error> {
    let text = std::fs::read_to_string(path)?;
    parse_sequence_file(&text)
}

fn read_y(path: &Path) -> Result<Vec<(usize, usize)>, Error> {
    let text = std::fs::read_to_string(path)?;
    let mut out = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let pair: &[&str] = if fields[0] == "y" { &fields[1..] } else { &fields };
        if pair.len() != 2 {
            return Err(Error::Parse { line: idx + 1, msg: "expected 'y u v'".into() });
        }
        let u: usize = pair[0].parse().map_err(|_| Error::invalid("bad vertex"))?;
        let v: usize = pair[1].parse().map_err(|_| Error::invalid("bad vertex"))?;
        out.push((u.min(v), u.max(v)));
    }
    Ok(out)
}

fn parse_caps(s: &str) -> Result<BalanceParams, Error> {
    match s {
        "practical" => Ok(BalanceParams::practical(0)),
        "theoretical" => Ok(BalanceParams::theoretical(0)),
        other => {
            let mut mv = None;
            let mut ps = None;
            for piece in other.split(',') {
                if let Some(v) = piece.strip_prefix("mv=") {
                    mv = Some(v.parse().map_err(|_| Error::invalid("bad mv cap"))?);
                } else if let Some(v) = piece.strip_prefix("ps=") {
                    ps = Some(v.parse().map_err(|_| Error::invalid("bad ps cap"))?);
                } else {
                    return Err(Error::invalid(format!("unknown caps value '{piece}'")));
                }
            }
            BalanceParams::with_caps(
                0,
                mv.unwrap_or(tww_core::balance::DEFAULT_MIXED_CAP),
                ps.unwrap_or(tww_core::balance::DEFAULT_PART_CAP),
            )
        }
    }
}

fn config_from(args: &SolveArgs) -> Result<TradeoffConfig, Error> {
    Ok(TradeoffConfig {
        regime: Regime::parse(&args.regime)?,
        threshold: args.threshold,
        budget: OracleBudget::default(),
        caps: OracleCaps::relaxed(),
        balance: parse_caps(&args.caps)?,
        seed: args.seed,
        ..TradeoffConfig::default()
    })
}

fn merged_y(file: &GraphFile, extra: Option<&Path>) -> Result<Option<BTreeSet<(usize, usize)>>, Error> {
    let mut y: Option<BTreeSet<(usize, usize)>> = file
        .prescribed
        .as_ref()
        .map(|v| v.iter().copied().collect());
    if let Some(path) = extra {
        let listed = read_y(path)?;
        y.get_or_insert_with(BTreeSet::new).extend(listed);
    }
    Ok(y)
}

struct Solved {
    n: usize,
    value: Q,
    bound: Q,
    solution: Value,
    trace: tww_core::driver::Trace,
    minimizing: bool,
    /// re-runs the oracle for `check`
    oracle_value: Box<dyn FnOnce(&TradeoffConfig) -> Result<Q, Error>>,
}

fn stars_json(stars: &[Star]) -> Value {
    Value::Array(
        stars
            .iter()
            .map(|s| json!({"root": s.root, "leaves": s.leaves}))
            .collect(),
    )
}

fn solve_problem(args: &SolveArgs, cfg: &TradeoffConfig) -> Result<Solved, Error> {
    let file = read_graph(&args.graph)?;
    let seq = read_seq(&args.seq)?;
    let g = file.trigraph.clone();
    let n = g.n();
    let src = BalanceSource::Sequence(&seq);
    match args.problem {
        Problem::Mis => {
            let weights = file.vertex_weights.clone().unwrap_or_else(|| vec![q(1); n]);
            let inst = WmisInstance::new(g.clone(), weights.clone())?;
            let out: ApproxResult<Vec<usize>> = if args.clustered {
                wmis_clustered(&inst, &src, cfg)?
            } else {
                wmis_approx(&inst, &src, cfg)?
            };
            Ok(Solved {
                n,
                value: out.value,
                bound: out.certified_bound,
                solution: json!(out.solution),
                trace: out.trace,
                minimizing: false,
                oracle_value: Box::new(move |cfg| {
                    Ok(oracles::exact_mis(&g, &weights, &cfg.budget, &cfg.caps)?.1)
                }),
            })
        }
        Problem::Setcol => {
            let demands = file.demands.clone().unwrap_or_else(|| vec![1; n]);
            let inst = SetColoringInstance::new(g.clone(), demands.clone())?;
            let out = set_coloring_approx(&inst, &src, cfg)?;
            Ok(Solved {
                n,
                value: out.value,
                bound: out.certified_bound,
                solution: json!(out.solution),
                trace: out.trace,
                minimizing: true,
                oracle_value: Box::new(move |cfg| {
                    Ok(q(oracles::exact_set_coloring(&g, &demands, &cfg.budget, &cfg.caps)?.1
                        as i64))
                }),
            })
        }
        Problem::Msim => {
            let y = merged_y(&file, args.y.as_deref())?;
            let inst = MsimInstance::new(g.clone(), y.clone(), file.edge_weights.clone())?;
            let out = msim_approx(&inst, &src, cfg)?;
            let inst2 = inst.clone();
            Ok(Solved {
                n,
                value: out.value,
                bound: out.certified_bound,
                solution: json!(out.solution),
                trace: out.trace,
                minimizing: false,
                oracle_value: Box::new(move |cfg| {
                    Ok(oracles::exact_msim(
                        &inst2.graph,
                        &|u, v| inst2.weight(u, v),
                        &|u, v| inst2.in_y(u, v),
                        &cfg.budget,
                        &cfg.caps,
                    )?
                    .1)
                }),
            })
        }
        Problem::Mlisf => {
            let y = merged_y(&file, args.y.as_deref())?;
            let weights = file.vertex_weights.clone().unwrap_or_else(|| vec![q(1); n]);
            let inst = StarForestInstance::new(g.clone(), weights.clone(), y)?;
            let out = mlisf_approx(&inst, &src, cfg)?;
            let inst2 = inst.clone();
            Ok(Solved {
                n,
                value: out.value,
                bound: out.certified_bound,
                solution: stars_json(&out.solution),
                trace: out.trace,
                minimizing: false,
                oracle_value: Box::new(move |cfg| {
                    Ok(oracles::exact_mlisf(
                        &inst2.graph,
                        &inst2.weights,
                        &|u, v| inst2.in_y(u, v),
                        &cfg.budget,
                        &cfg.caps,
                    )?
                    .1)
                }),
            })
        }
        Problem::Mief => {
            let y = merged_y(&file, args.y.as_deref())?;
            let out = mief_approx(g.clone(), y.clone(), &src, cfg)?;
            let unit = vec![q(1); n];
            Ok(Solved {
                n,
                value: out.value,
                bound: out.certified_bound,
                solution: stars_json(&out.solution),
                trace: out.trace,
                minimizing: false,
                oracle_value: Box::new(move |cfg| {
                    // forest optimum is bounded by the star-forest optimum
                    // times 3; the comparison baseline stays the star oracle
                    let pred = |u: usize, v: usize| {
                        y.as_ref().map_or(true, |set| set.contains(&(u.min(v), u.max(v))))
                    };
                    Ok(oracles::exact_mlisf(&g, &unit, &pred, &cfg.budget, &cfg.caps)?.1)
                }),
            })
        }
        Problem::Aihp => {
            let pattern_path = args
                .pattern
                .as_ref()
                .ok_or_else(|| Error::invalid("aihp needs --pattern"))?;
            let pat_file = read_graph(pattern_path)?;
            let pattern = pat_file.trigraph.clone();
            let host_labels = file.host_labels.clone().unwrap_or_else(|| vec![1; n]);
            let pattern_labels = pat_file
                .pattern_labels
                .clone()
                .or_else(|| pat_file.host_labels.clone())
                .unwrap_or_else(|| vec![1; pattern.n()]);
            let weights = TupleWeights {
                overrides: file.tuple_weights.iter().cloned().collect(),
                symmetric: false,
                indicator_default: true,
            };
            let inst =
                AihpInstance::new(g, pattern, host_labels, pattern_labels, weights)?;
            let out = aihp_approx(&inst, &src, cfg)?;
            let inst2 = inst.clone();
            Ok(Solved {
                n,
                value: out.value,
                bound: out.certified_bound,
                solution: json!(out.solution),
                trace: out.trace,
                minimizing: false,
                oracle_value: Box::new(move |cfg| {
                    Ok(oracles::exact_aihp(
                        &inst2.graph,
                        &inst2.pattern,
                        &inst2.host_labels,
                        &inst2.pattern_labels,
                        &|t| inst2.tuple_weight(t),
                        &cfg.budget,
                        &cfg.caps,
                    )?
                    .1)
                }),
            })
        }
    }
}

fn report_of(problem: Problem, s: &Solved) -> Report {
    Report {
        schema: "v1",
        problem: problem.name().to_string(),
        n: s.n,
        value: format_rational(&s.value),
        certified_bound: format_rational(&s.bound),
        solution: s.solution.clone(),
        trace: s.trace.report(),
    }
}

fn oracle_report(problem: Problem, graph: &Path, pattern: Option<&Path>, y: Option<&Path>) -> Result<Value, Error> {
    let file = read_graph(graph)?;
    let g = file.trigraph.clone();
    let n = g.n();
    let budget = OracleBudget::default();
    let caps = OracleCaps::relaxed();
    let (value, solution): (Q, Value) = match problem {
        Problem::Mis => {
            let weights = file.vertex_weights.clone().unwrap_or_else(|| vec![q(1); n]);
            let (set, v) = oracles::exact_mis(&g, &weights, &budget, &caps)?;
            (v, json!(set))
        }
        Problem::Setcol => {
            let demands = file.demands.clone().unwrap_or_else(|| vec![1; n]);
            let (palettes, k) = oracles::exact_set_coloring(&g, &demands, &budget, &caps)?;
            (q(k as i64), json!(palettes))
        }
        Problem::Msim => {
            let yset = merged_y(&file, y)?;
            let inst = MsimInstance::new(g.clone(), yset, file.edge_weights.clone())?;
            let (edges, v) = oracles::exact_msim(
                &inst.graph,
                &|a, b| inst.weight(a, b),
                &|a, b| inst.in_y(a, b),
                &budget,
                &caps,
            )?;
            (v, json!(edges))
        }
        Problem::Mlisf | Problem::Mief => {
            let yset = merged_y(&file, y)?;
            let weights = file.vertex_weights.clone().unwrap_or_else(|| vec![q(1); n]);
            let inst = StarForestInstance::new(g, weights, yset)?;
            let (stars, v) = oracles::exact_mlisf(
                &inst.graph,
                &inst.weights,
                &|a, b| inst.in_y(a, b),
                &budget,
                &caps,
            )?;
            (v, stars_json(&stars))
        }
        Problem::Aihp => {
            let pattern_path = pattern.ok_or_else(|| Error::invalid("aihp needs --pattern"))?;
            let pat_file = read_graph(pattern_path)?;
            let pattern = pat_file.trigraph.clone();
            let host_labels = file.host_labels.clone().unwrap_or_else(|| vec![1; n]);
            let pattern_labels = pat_file
                .pattern_labels
                .clone()
                .or_else(|| pat_file.host_labels.clone())
                .unwrap_or_else(|| vec![1; pattern.n()]);
            let weights = TupleWeights {
                overrides: file.tuple_weights.iter().cloned().collect(),
                symmetric: false,
                indicator_default: true,
            };
            let inst = AihpInstance::new(g, pattern, host_labels, pattern_labels, weights)?;
            let (copies, v) = oracles::exact_aihp(
                &inst.graph,
                &inst.pattern,
                &inst.host_labels,
                &inst.pattern_labels,
                &|t| inst.tuple_weight(t),
                &budget,
                &caps,
            )?;
            (v, json!(copies))
        }
    };
    Ok(json!({
        "schema": "v1",
        "problem": problem.name(),
        "n": n,
        "value": format_rational(&value),
        "solution": solution,
    }))
}

fn realized_ratio(minimizing: bool, value: &Q, opt: &Q) -> Option<Q> {
    if minimizing {
        if *opt == q(0) {
            return (*value == q(0)).then(|| q(1));
        }
        Some(*value / *opt)
    } else {
        if *value == q(0) {
            return (*opt == q(0)).then(|| q(1));
        }
        Some(*opt / *value)
    }
}

fn run(cli: Cli) -> Result<i32, Error> {
    match cli.command {
        Command::Verify { graph, seq } => {
            let g = read_graph(&graph)?.trigraph;
            let s = read_seq(&seq)?;
            let report = verify_sequence(&g, &s)?;
            println!(
                "{}",
                json!({
                    "schema": "v1",
                    "n": g.n(),
                    "steps": s.len(),
                    "width": report.width,
                    "argmax_step": report.argmax_step,
                    "per_step": report.per_step,
                    "full": s.is_full(),
                })
            );
            Ok(0)
        }
        Command::Partition { graph, seq, caps, trace_balance } => {
            let g = read_graph(&graph)?.trigraph;
            let s = read_seq(&seq)?;
            let width = verify_sequence(&g, &s)?.width;
            let mut params = parse_caps(&caps)?;
            params.d_hat = width;
            let bp = tww_core::balance::balanced_partition(
                &g,
                &BalanceSource::Sequence(&s),
                &params,
            )?;
            if trace_balance {
                for r in &bp.rounds {
                    eprintln!(
                        "round live={} parts={} fusions={} pairs={} s_eff={} merged={}",
                        r.live, r.parts, r.fusions, r.pairs_found, r.s_eff, r.merged_size
                    );
                }
            }
            println!(
                "{}",
                json!({
                    "schema": "v1",
                    "n": g.n(),
                    "width": width,
                    "parts": bp.partition.len(),
                    "achieved_part_size": bp.achieved_part_size,
                    "achieved_red_degree": bp.achieved_red_degree,
                    "balance_certified": bp.balance_certified,
                    "rounds": bp.rounds.len(),
                    "theory": {
                        "d": params.d(),
                        "c_d": params.c_d(),
                        "log2_s": params.log2_s(),
                        "log2_d_prime": params.log2_d_prime(),
                    },
                    "partition": bp.partition.parts(),
                })
            );
            Ok(0)
        }
        Command::Solve(args) => {
            let cfg = config_from(&args)?;
            let solved = solve_problem(&args, &cfg)?;
            println!("{}", serde_json::to_string(&report_of(args.problem, &solved)).unwrap());
            Ok(0)
        }
        Command::Oracle { problem, graph, pattern, y } => {
            let payload = oracle_report(problem, &graph, pattern.as_deref(), y.as_deref())?;
            println!("{payload}");
            Ok(0)
        }
        Command::Check(args) => {
            let cfg = config_from(&args)?;
            let solved = solve_problem(&args, &cfg)?;
            let opt = (solved.oracle_value)(&cfg)?;
            let realized = realized_ratio(solved.minimizing, &solved.value, &opt);
            let ok = match &realized {
                Some(r) => *r <= solved.bound,
                None => false,
            };
            println!(
                "{}",
                json!({
                    "schema": "v1",
                    "problem": args.problem.name(),
                    "n": solved.n,
                    "value": format_rational(&solved.value),
                    "opt": format_rational(&opt),
                    "certified_bound": format_rational(&solved.bound),
                    "realized": realized.as_ref().map(format_rational),
                    "ok": ok,
                })
            );
            if ok {
                Ok(0)
            } else {
                Err(Error::Certificate(format!(
                    "realized ratio {} exceeds certified bound {}",
                    realized.map(|r| format_rational(&r)).unwrap_or_else(|| "inf".into()),
                    format_rational(&solved.bound)
                )))
            }
        }
        Command::Gen { family, n, d, seed, out, input } => {
            let (g, seq) = match family.as_str() {
                "figure1" => instances::gen_figure1(),
                "cograph" => instances::gen_cograph(n, seed)?,
                "uncontract" => instances::gen_by_uncontraction(n, d, seed)?,
                "greedy" => {
                    let path = input.ok_or_else(|| Error::invalid("family greedy needs --in"))?;
                    let g = read_graph(&path)?.trigraph;
                    let outcome = instances::greedy_sequence(&g, d)?;
                    match outcome.sequence {
                        Some(seq) => (g, seq),
                        None => {
                            return Err(Error::invalid(format!(
                                "greedy width {} exceeds cap {d}",
                                outcome.width
                            )))
                        }
                    }
                }
                other => return Err(Error::invalid(format!("unknown family '{other}'"))),
            };
            let graph_path = out.with_extension("tgf");
            let seq_path = out.with_extension("seq");
            std::fs::write(&graph_path, write_graph_file(&g))?;
            std::fs::write(&seq_path, write_sequence_file(&seq))?;
            let width = verify_sequence(&g, &seq)?.width;
            println!(
                "{}",
                json!({
                    "schema": "v1",
                    "graph": graph_path,
                    "seq": seq_path,
                    "n": g.n(),
                    "edges": g.black_edge_count(),
                    "width": width,
                })
            );
            Ok(0)
        }
        Command::Bench { manifest, out, regime, threshold, seed } => {
            let text = std::fs::read_to_string(&manifest)?;
            let base = manifest.parent().map(Path::to_path_buf).unwrap_or_default();
            let mut rows = Vec::new();
            for (idx, raw) in text.lines().enumerate() {
                let line = raw.split('#').next().unwrap_or("").trim();
                if line.is_empty() || line.starts_with("instance") {
                    continue;
                }
                let fields: Vec<&str> = line.split(',').map(str::trim).collect();
                if fields.len() < 4 {
                    return Err(Error::Parse {
                        line: idx + 1,
                        msg: "manifest row needs: id,graph,seq,problem".into(),
                    });
                }
                let problem = match fields[3] {
                    "mis" => Problem::Mis,
                    "setcol" => Problem::Setcol,
                    "msim" => Problem::Msim,
                    "mlisf" => Problem::Mlisf,
                    "mief" => Problem::Mief,
                    other => return Err(Error::invalid(format!("unknown problem '{other}'"))),
                };
                let args = SolveArgs {
                    problem,
                    graph: base.join(fields[1]),
                    seq: base.join(fields[2]),
                    pattern: None,
                    y: None,
                    regime: regime.clone(),
                    threshold,
                    seed,
                    caps: "practical".into(),
                    clustered: false,
                };
                let cfg = config_from(&args)?;
                let solved = solve_problem(&args, &cfg)?;
                let opt = (solved.oracle_value)(&cfg).ok();
                let realized = opt
                    .as_ref()
                    .and_then(|o| realized_ratio(solved.minimizing, &solved.value, o));
                let d_eff = solved.trace.d_eff_levels.first().copied().unwrap_or(0);
                rows.push((
                    fields[0].to_string(),
                    format!(
                        "{},{},{},{},{},{},{},{},{}",
                        fields[0],
                        solved.n,
                        d_eff,
                        solved.trace.depth_budget,
                        format_rational(&solved.value),
                        opt.map(|o| format_rational(&o)).unwrap_or_default(),
                        format_rational(&solved.bound),
                        realized.map(|r| format_rational(&r)).unwrap_or_default(),
                        solved.trace.ms,
                    ),
                ));
            }
            rows.sort();
            let mut csv = String::from("instance,n,d_eff,q,value,opt,certified,realized,ms\n");
            for (_, row) in rows {
                csv.push_str(&row);
                csv.push('\n');
            }
            match out {
                Some(path) => std::fs::write(path, csv)?,
                None => print!("{csv}"),
            }
            Ok(0)
        }
    }
}

