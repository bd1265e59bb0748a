//! Command-line front end: sampling, reachability queries, component
//! estimates, closed-form quantities, and the Monte Carlo drivers.
//!
//! Machine-readable results go to `--out` (or stdout) in the chosen
//! `--format`; auxiliary human notes go to stderr. Exit codes: 0 success,
//! 2 domain error (bad parameters), 3 self-test gate failure, 1 I/O or
//! parse failure.

use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use rstg::components::{
    largest_closed_exact_tiny, largest_closed_peel, largest_open_bounds, largest_open_exact,
    ComponentEstimate, CLOSED_EXACT_CAP_DEFAULT, OPEN_EXACT_CAP_DEFAULT,
};
use rstg::experiments::{
    run_added_vertex_uniformity, run_oracle_selftest, run_phase_protocol_sampled, run_sweep,
    run_target_set_study, run_threshold_ladder, run_waiting_time_study, write_sweep_csv,
    ComponentMethod, SweepConfig, UniformityBase, WindowProtocol,
};
use rstg::models::{sample_fnp, sample_fnp_sparse, sample_rstg_permutation};
use rstg::reach::{all_pairs_arrival, foremost_forest, ForestMode};
use rstg::theory::{self, ThresholdKind};
use rstg::{Error, Result, TemporalGraph, TimeWindow, VertexId};

#[derive(Parser)]
#[command(
    name = "rstg",
    version,
    about = "Random simple temporal graphs: samplers, reachability, components, experiments"
)]
struct Cli {
    /// Master RNG seed for every randomized command.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Worker threads for parallel drivers (0 = all cores).
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,

    /// Write results to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Result encoding for machine-readable output.
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,

    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Cmd {
    /// Sample a random temporal graph and emit it as tgf text.
    Gen(GenArgs),
    /// Grow an earliest-arrival forest from a source set.
    Forest(ForestArgs),
    /// Reachability queries on a tgf file.
    Reach(ReachArgs),
    /// Largest open/closed temporally connected component estimates.
    Components(ComponentsArgs),
    /// Closed-form threshold and concentration quantities.
    Theory(TheoryArgs),
    /// Grid sweep over (n, c) with p = c log n / n.
    Sweep(SweepArgs),
    /// Three-interval reachability protocol at a single n.
    Phase(PhaseArgs),
    /// Waiting-time concentration study on fully labelled complete graphs.
    Waiting(WaitingArgs),
    /// Random-source-set to random-target-set reachability frequency.
    Target(TargetArgs),
    /// Empirical 0.5-crossings of the pair/source/connectivity curves.
    Ladder(LadderArgs),
    /// Distribution of the vertex acquired at a fixed growth checkpoint.
    Uniformity(UniformityArgs),
    /// Cross-validate the reachability engines against independent oracles.
    Selftest(SelftestArgs),
}

#[derive(Args)]
struct GenArgs {
    #[arg(long)]
    n: usize,
    /// Label budget: edges with labels above p are dropped.
    #[arg(long)]
    p: f64,
    #[arg(long, value_enum, default_value_t = Model::Uniform)]
    model: Model,
}

#[derive(Clone, Copy, ValueEnum)]
enum Model {
    /// Uniform labels on the complete graph, truncated at p.
    Uniform,
    /// Same distribution, O(retained edges) sampler.
    Sparse,
    /// Binomial graph with rank labels (i - 0.5)/m.
    Permutation,
}

#[derive(Args)]
struct ForestArgs {
    /// Input graph in tgf form.
    #[arg(long)]
    input: PathBuf,
    /// Comma-separated source vertex ids.
    #[arg(long)]
    sources: String,
    /// Label window "a,b" (default: the whole of [0, 1]).
    #[arg(long)]
    window: Option<String>,
    #[arg(long, value_enum, default_value_t = Mode::Sweep)]
    mode: Mode,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    /// Rescan all boundary edges per step (reference implementation).
    Literal,
    /// Single ascending pass over the edge list.
    Sweep,
}

#[derive(Args)]
struct ReachArgs {
    #[arg(long)]
    input: PathBuf,
    /// Report one vertex's reach/coreach sets instead of the summary table.
    #[arg(long)]
    source: Option<u32>,
    #[arg(long)]
    window: Option<String>,
}

#[derive(Args)]
struct ComponentsArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    window: Option<String>,
    #[arg(long, value_enum, default_value_t = CompMethod::Bounds)]
    method: CompMethod,
}

#[derive(Clone, Copy, ValueEnum)]
enum CompMethod {
    /// Greedy clique lower bound plus coloring/degree upper bound.
    Bounds,
    /// Exact branch-and-bound open component (n <= 64).
    OpenExact,
    /// Exact closed component by subset enumeration (n <= 20).
    ClosedExact,
    /// Peeling lower bound for the closed component.
    Peel,
}

#[derive(Args)]
struct TheoryArgs {
    #[arg(long, value_enum)]
    op: TheoryOp,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    s: Option<usize>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    beta: Option<f64>,
    /// Target fraction for the growth-time query.
    #[arg(long)]
    z: Option<f64>,
    /// Exponent in the (log n)^a deviation terms.
    #[arg(long)]
    a: Option<f64>,
    #[arg(long)]
    y_prev: Option<f64>,
}

#[derive(Clone, Copy, ValueEnum)]
enum TheoryOp {
    /// Expected arrival sum over [s, k] and its logarithmic estimate.
    ArrivalSum,
    /// Truncation constant c_k for capped waiting times.
    Cap,
    /// Ceiling on the sum of squared truncation constants.
    CapSum,
    /// The four connectivity thresholds as multiples of log n / n.
    Thresholds,
    /// Lower bound on two-hop temporal connectivity at p = alpha (log n / n)^beta.
    TwoHop,
    /// Time for a forest to grow from s seeds to a z fraction of n.
    Growth,
    /// Interval-protocol band exponent 1 / log log n.
    Epsilon,
    /// Deviation scale for the checkpoint-vertex distribution.
    Gamma,
    /// Bracket on E[X_k] given the previous arrival.
    WaitingBounds,
}

#[derive(Args)]
struct SweepArgs {
    /// Comma-separated list of graph sizes.
    #[arg(long)]
    n_values: String,
    /// Comma-separated list of c multipliers (p = c log n / n).
    #[arg(long)]
    c_grid: String,
    #[arg(long)]
    trials: usize,
    #[arg(long, default_value = "whole")]
    protocol: String,
    #[arg(long, default_value = "bounds")]
    method: String,
}

#[derive(Args)]
struct PhaseArgs {
    #[arg(long)]
    n: usize,
    /// Number of sampled ordered pairs for the spot check.
    #[arg(long, default_value_t = 30)]
    pairs: usize,
}

#[derive(Args)]
struct WaitingArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    s: usize,
    #[arg(long)]
    trials: usize,
}

#[derive(Args)]
struct TargetArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    s_size: usize,
    #[arg(long)]
    t_size: usize,
    #[arg(long)]
    p: f64,
    #[arg(long)]
    trials: usize,
}

#[derive(Args)]
struct LadderArgs {
    #[arg(long)]
    n: usize,
    /// Comma-separated c grid; must span [0.5, 4].
    #[arg(long)]
    c_grid: String,
    #[arg(long)]
    trials: usize,
}

#[derive(Args)]
struct UniformityArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    s_size: usize,
    #[arg(long)]
    trials: usize,
    /// Forest size at which the acquired vertex is recorded.
    #[arg(long)]
    checkpoint: usize,
    #[arg(long, default_value = "complete")]
    base: String,
}

#[derive(Args)]
struct SelftestArgs {
    #[arg(long, default_value_t = 200)]
    instances: usize,
    #[arg(long, default_value_t = 5)]
    n_min: usize,
    #[arg(long, default_value_t = 40)]
    n_max: usize,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.threads > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(cli.threads)
            .build_global()
            .ok();
    }
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Io(_) | Error::Parse { .. } => ExitCode::from(1),
                _ => ExitCode::from(2),
            }
        }
    }
}

fn run(cli: &Cli) -> Result<ExitCode> {
    match &cli.cmd {
        Cmd::Gen(a) => gen(cli, a),
        Cmd::Forest(a) => forest(cli, a),
        Cmd::Reach(a) => reach(cli, a),
        Cmd::Components(a) => components(cli, a),
        Cmd::Theory(a) => theory_cmd(cli, a),
        Cmd::Sweep(a) => sweep(cli, a),
        Cmd::Phase(a) => phase(cli, a),
        Cmd::Waiting(a) => waiting(cli, a),
        Cmd::Target(a) => target(cli, a),
        Cmd::Ladder(a) => ladder(cli, a),
        Cmd::Uniformity(a) => uniformity(cli, a),
        Cmd::Selftest(a) => selftest(cli, a),
    }
}

// ---- plumbing ----

fn emit(cli: &Cli, text: &str) -> Result<()> {
    match &cli.out {
        Some(p) => std::fs::write(p, text)?,
        None => {
            print!("{text}");
            std::io::stdout().flush()?;
        }
    }
    Ok(())
}

fn to_json(v: &impl serde::Serialize) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable result");
    s.push('\n');
    s
}

fn render_scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// Flatten a JSON object into `key,value` CSV rows; nested objects use
/// dotted keys and arrays of scalars join with spaces.
fn kv_csv(v: &Value) -> String {
    fn push(out: &mut String, key: &str, v: &Value) {
        match v {
            Value::Object(map) => {
                for (k2, v2) in map {
                    let key2 = if key.is_empty() { k2.clone() } else { format!("{key}.{k2}") };
                    push(out, &key2, v2);
                }
            }
            Value::Array(items) => {
                let joined: Vec<String> = items.iter().map(render_scalar).collect();
                out.push_str(&format!("{key},{}\n", joined.join(" ")));
            }
            scalar => out.push_str(&format!("{key},{}\n", render_scalar(scalar))),
        }
    }
    let mut out = String::from("key,value\n");
    push(&mut out, "", v);
    out
}

fn emit_value(cli: &Cli, v: &Value) -> Result<()> {
    match cli.format {
        Format::Json => emit(cli, &to_json(v)),
        Format::Csv => emit(cli, &kv_csv(v)),
    }
}

fn parse_list<T: std::str::FromStr>(s: &str, what: &str) -> Result<Vec<T>> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse::<T>()
                .map_err(|_| Error::domain(format!("bad {what} entry {t:?}")))
        })
        .collect()
}

fn parse_window(w: &Option<String>) -> Result<TimeWindow> {
    match w {
        None => Ok(TimeWindow::full()),
        Some(s) => {
            let parts: Vec<f64> = parse_list(s, "window bound")?;
            if parts.len() != 2 {
                return Err(Error::domain("window must be two comma-separated labels"));
            }
            TimeWindow::from_f64(parts[0], parts[1])
        }
    }
}

fn load_graph(path: &PathBuf) -> Result<TemporalGraph> {
    rstg::io::read_tgf(path)
}

fn need<T: Copy>(v: Option<T>, name: &str) -> Result<T> {
    v.ok_or_else(|| Error::domain(format!("--{name} is required for this op")))
}

fn estimate_json(e: &ComponentEstimate) -> Value {
    json!({
        "kind": e.kind,
        "method": e.method,
        "lower": e.size_lower(),
        "upper": e.upper_bound,
        "witness": e.lower_set.iter().map(|v| v.0).collect::<Vec<_>>(),
    })
}

// ---- subcommands ----

fn gen(cli: &Cli, a: &GenArgs) -> Result<ExitCode> {
    let mut rng = rstg::RngStream::new(cli.seed, 0).rng();
    let g = match a.model {
        Model::Uniform => sample_fnp(a.n, a.p, &mut rng)?,
        Model::Sparse => sample_fnp_sparse(a.n, a.p, &mut rng)?,
        Model::Permutation => sample_rstg_permutation(a.n, a.p, &mut rng)?,
    };
    emit(cli, &rstg::io::to_tgf(&g))?;
    Ok(ExitCode::SUCCESS)
}

fn forest(cli: &Cli, a: &ForestArgs) -> Result<ExitCode> {
    let g = load_graph(&a.input)?;
    let sources: Vec<VertexId> = parse_list::<u32>(&a.sources, "source id")?
        .into_iter()
        .map(VertexId)
        .collect();
    let window = parse_window(&a.window)?;
    let mode = match a.mode {
        Mode::Literal => ForestMode::Literal,
        Mode::Sweep => ForestMode::Sweep,
    };
    let (forest, wt) = foremost_forest(&g, &sources, window, mode)?;
    match cli.format {
        Format::Json => {
            let v = json!({
                "sources": forest.sources().iter().map(|v| v.0).collect::<Vec<_>>(),
                "added": forest.added(),
                "waiting": wt,
            });
            emit(cli, &to_json(&v))?;
        }
        Format::Csv => {
            let mut out = String::from("k,vertex,parent,label\n");
            for e in forest.added() {
                out.push_str(&format!("{},{},{},{}\n", e.k, e.vertex.0, e.parent.0, e.label));
            }
            emit(cli, &out)?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn reach(cli: &Cli, a: &ReachArgs) -> Result<ExitCode> {
    let g = load_graph(&a.input)?;
    let window = parse_window(&a.window)?;
    let m = all_pairs_arrival(&g, window);
    let n = g.n();
    match a.source {
        Some(s) => {
            if s as usize >= n {
                return Err(Error::VertexOutOfRange { id: s, n });
            }
            let s = VertexId(s);
            match cli.format {
                Format::Json => {
                    let arrivals: Vec<Option<f64>> =
                        (0..n as u32).map(|v| m.arrival(s, VertexId(v))).collect();
                    let v = json!({
                        "source": s.0,
                        "reach_set": (0..n as u32).filter(|&v| m.reaches(s, VertexId(v))).collect::<Vec<_>>(),
                        "coreach_set": (0..n as u32).filter(|&v| m.reaches(VertexId(v), s)).collect::<Vec<_>>(),
                        "arrivals": arrivals,
                    });
                    emit(cli, &to_json(&v))?;
                }
                Format::Csv => {
                    let mut out = String::from("v,reached,arrival,coreaches\n");
                    for v in 0..n as u32 {
                        let v = VertexId(v);
                        let arr = m
                            .arrival(s, v)
                            .map(|t| t.to_string())
                            .unwrap_or_default();
                        out.push_str(&format!(
                            "{},{},{},{}\n",
                            v.0,
                            m.reaches(s, v) as u8,
                            arr,
                            m.reaches(v, s) as u8
                        ));
                    }
                    emit(cli, &out)?;
                }
            }
        }
        None => {
            let reach_counts = m.reach_counts();
            match cli.format {
                Format::Json => {
                    let v = json!({
                        "n": n,
                        "reach_counts": reach_counts,
                        "coreach_counts": (0..n as u32).map(|v| m.coreach_count(VertexId(v))).collect::<Vec<_>>(),
                        "sources": (0..n as u32).filter(|&v| m.is_source(VertexId(v))).collect::<Vec<_>>(),
                        "is_tc": m.is_temporally_connected(),
                    });
                    emit(cli, &to_json(&v))?;
                }
                Format::Csv => {
                    let mut out = String::from("v,reach_count,coreach_count,is_source\n");
                    for v in 0..n as u32 {
                        out.push_str(&format!(
                            "{},{},{},{}\n",
                            v,
                            reach_counts[v as usize],
                            m.coreach_count(VertexId(v)),
                            m.is_source(VertexId(v)) as u8
                        ));
                    }
                    emit(cli, &out)?;
                }
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn components(cli: &Cli, a: &ComponentsArgs) -> Result<ExitCode> {
    let g = load_graph(&a.input)?;
    let window = parse_window(&a.window)?;
    let est = match a.method {
        CompMethod::Bounds => largest_open_bounds(&g, window),
        CompMethod::OpenExact => largest_open_exact(&g, window, OPEN_EXACT_CAP_DEFAULT)?,
        CompMethod::ClosedExact => largest_closed_exact_tiny(&g, window, CLOSED_EXACT_CAP_DEFAULT)?,
        CompMethod::Peel => largest_closed_peel(&g, window),
    };
    match cli.format {
        Format::Json => emit(cli, &to_json(&estimate_json(&est)))?,
        Format::Csv => {
            let witness: Vec<String> = est.lower_set.iter().map(|v| v.0.to_string()).collect();
            let kind = serde_json::to_value(est.kind).expect("enum serializes");
            let out = format!(
                "kind,method,lower,upper,witness\n{},{},{},{},{}\n",
                kind.as_str().expect("snake-case name"),
                est.method,
                est.size_lower(),
                est.upper_bound,
                witness.join(" ")
            );
            emit(cli, &out)?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn theory_cmd(cli: &Cli, a: &TheoryArgs) -> Result<ExitCode> {
    let v = match a.op {
        TheoryOp::ArrivalSum => {
            let (n, s, k) = (need(a.n, "n")?, need(a.s, "s")?, need(a.k, "k")?);
            json!({
                "op": "arrival-sum", "n": n, "s": s, "k": k,
                "exact": theory::harmonic_sum(s, k, n)?,
                "estimate": theory::harmonic_sum_estimate(s, k, n)?,
            })
        }
        TheoryOp::Cap => {
            let (n, s, k) = (need(a.n, "n")?, need(a.s, "s")?, need(a.k, "k")?);
            json!({
                "op": "cap", "n": n, "s": s, "k": k,
                "cap": theory::truncation_constant(k, n, s)?,
            })
        }
        TheoryOp::CapSum => {
            let (n, s) = (need(a.n, "n")?, need(a.s, "s")?);
            json!({
                "op": "cap-sum", "n": n, "s": s,
                "report": theory::truncation_sq_sum(n, s)?,
            })
        }
        TheoryOp::Thresholds => {
            let n = need(a.n, "n")?;
            let mut map = serde_json::Map::new();
            map.insert("op".into(), "thresholds".into());
            map.insert("n".into(), n.into());
            for kind in ThresholdKind::ALL {
                let key = serde_json::to_value(kind).expect("enum serializes");
                map.insert(
                    key.as_str().expect("snake-case name").to_string(),
                    theory::threshold(kind, n)?.into(),
                );
            }
            Value::Object(map)
        }
        TheoryOp::TwoHop => {
            let (n, alpha, beta) = (need(a.n, "n")?, need(a.alpha, "alpha")?, need(a.beta, "beta")?);
            json!({
                "op": "two-hop", "n": n, "alpha": alpha, "beta": beta,
                "probability_lower_bound": theory::two_hop_bound(n, alpha, beta)?,
            })
        }
        TheoryOp::Growth => {
            let (z, s, n) = (need(a.z, "z")?, need(a.s, "s")?, need(a.n, "n")?);
            json!({
                "op": "growth", "z": z, "s": s, "n": n,
                "time": theory::growth_time(z, s, n)?,
            })
        }
        TheoryOp::Epsilon => {
            let n = need(a.n, "n")?;
            json!({ "op": "epsilon", "n": n, "epsilon": theory::epsilon(n)? })
        }
        TheoryOp::Gamma => {
            let (n, aa, s) = (need(a.n, "n")?, need(a.a, "a")?, need(a.s, "s")?);
            json!({
                "op": "gamma", "n": n, "a": aa, "s": s,
                "gamma": theory::added_vertex_gamma(n, aa, s)?,
            })
        }
        TheoryOp::WaitingBounds => {
            let (k, n) = (need(a.k, "k")?, need(a.n, "n")?);
            let (aa, y) = (need(a.a, "a")?, need(a.y_prev, "y-prev")?);
            json!({
                "op": "waiting-bounds", "k": k, "n": n, "a": aa, "y_prev": y,
                "report": theory::expected_waiting_bounds(k, n, aa, y)?,
            })
        }
    };
    emit_value(cli, &v)?;
    Ok(ExitCode::SUCCESS)
}

fn sweep(cli: &Cli, a: &SweepArgs) -> Result<ExitCode> {
    let cfg = SweepConfig {
        n_values: parse_list(&a.n_values, "n value")?,
        c_grid: parse_list(&a.c_grid, "c value")?,
        trials: a.trials,
        master_seed: cli.seed,
        window_protocol: a.protocol.parse::<WindowProtocol>()?,
        component_method: a.method.parse::<ComponentMethod>()?,
    };
    let out = run_sweep(&cfg)?;
    for f in &out.failures {
        eprintln!("trial failed: {f}");
    }
    match cli.format {
        Format::Json => emit(cli, &to_json(&out.records))?,
        Format::Csv => {
            let mut buf = Vec::new();
            write_sweep_csv(&out.records, &mut buf)?;
            emit(cli, std::str::from_utf8(&buf).expect("csv is utf-8"))?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn phase(cli: &Cli, a: &PhaseArgs) -> Result<ExitCode> {
    let record = run_phase_protocol_sampled(a.n, cli.seed, a.pairs)?;
    emit_value(cli, &serde_json::to_value(&record).expect("serializable"))?;
    Ok(ExitCode::SUCCESS)
}

fn waiting(cli: &Cli, a: &WaitingArgs) -> Result<ExitCode> {
    let summary = run_waiting_time_study(a.n, a.s, a.trials, cli.seed)?;
    match cli.format {
        Format::Json => emit(cli, &to_json(&summary))?,
        Format::Csv => {
            let mut out = String::from("trial,max_dev_exact,max_dev_log\n");
            for (i, (e, l)) in summary
                .max_dev_exact
                .iter()
                .zip(&summary.max_dev_log)
                .enumerate()
            {
                out.push_str(&format!("{i},{e},{l}\n"));
            }
            emit(cli, &out)?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn target(cli: &Cli, a: &TargetArgs) -> Result<ExitCode> {
    let hit_rate = run_target_set_study(a.n, a.s_size, a.t_size, a.p, a.trials, cli.seed)?;
    emit_value(
        cli,
        &json!({
            "n": a.n, "s_size": a.s_size, "t_size": a.t_size,
            "p": a.p, "trials": a.trials, "hit_rate": hit_rate,
        }),
    )?;
    Ok(ExitCode::SUCCESS)
}

fn ladder(cli: &Cli, a: &LadderArgs) -> Result<ExitCode> {
    let grid: Vec<f64> = parse_list(&a.c_grid, "c value")?;
    let r = run_threshold_ladder(a.n, &grid, a.trials, cli.seed)?;
    match cli.format {
        Format::Json => emit(cli, &to_json(&r))?,
        Format::Csv => {
            let mut out = String::from("c,pair,source,tc\n");
            for i in 0..r.c_grid.len() {
                out.push_str(&format!(
                    "{},{},{},{}\n",
                    r.c_grid[i], r.pair_curve[i], r.source_curve[i], r.tc_curve[i]
                ));
            }
            emit(cli, &out)?;
            eprintln!("crossings: c_pair={} c_source={} c_tc={}", r.c_pair, r.c_source, r.c_tc);
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn uniformity(cli: &Cli, a: &UniformityArgs) -> Result<ExitCode> {
    let base = a.base.parse::<UniformityBase>()?;
    let r = run_added_vertex_uniformity(a.n, a.s_size, a.trials, a.checkpoint, base, cli.seed)?;
    match cli.format {
        Format::Json => emit(cli, &to_json(&r))?,
        Format::Csv => {
            let mut out = String::from("vertex,count\n");
            for (i, c) in r.counts.iter().enumerate() {
                out.push_str(&format!("{},{}\n", i + r.s_size, c));
            }
            emit(cli, &out)?;
            eprintln!(
                "max_scaled_deviation={} chi_square_p={}",
                r.max_scaled_deviation, r.chi_square_p
            );
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn selftest(cli: &Cli, a: &SelftestArgs) -> Result<ExitCode> {
    let report = run_oracle_selftest(a.instances, (a.n_min, a.n_max), cli.seed)?;
    emit_value(cli, &serde_json::to_value(&report).expect("serializable"))?;
    if report.passed() {
        Ok(ExitCode::SUCCESS)
    } else {
        for f in &report.failures {
            eprintln!("selftest failure: {f}");
        }
        Ok(ExitCode::from(3))
    }
}
