use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;

use clap::{ArgGroup, Args};
use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;

use pebblelab::bipartite::{
    config_to_multigraph, multigraph_to_config, BipartiteMultigraph, ModelParams, ModelRegistry,
};
use pebblelab::config::PebbleConfiguration;
use pebblelab::exact::{ExactSolver, DEFAULT_STATE_BUDGET};
use pebblelab::lab::stats::chi_square_uniform_p_value;
use pebblelab::lab::{self, ExperimentParams, ExperimentRegistry};
use pebblelab::rng;
use pebblelab::rook::{
    catch_plan, verify_line_graph_iso, GridVertex, RookConfig, RookGraph, TierOptions,
    TierRegistry, TieredSolver, DEFAULT_TIER_ORDER,
};
use pebblelab::space::{enumerate_configurations, sample_configuration, DEFAULT_ENUMERATION_CAP};
use pebblelab::support::{self, SupportLaw};

use crate::manifest::emit;
use crate::{CliError, Format, Output, DEFAULT_SEED};

type CmdResult = Result<(), CliError>;

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("report types serialize") + "\n"
}

fn parse_list<T: std::str::FromStr>(flag: &str, text: &str) -> Result<Vec<T>, CliError> {
    text.split(',')
        .map(|s| {
            s.trim()
                .parse()
                .map_err(|_| usage(format!("--{flag}: cannot parse '{s}'")))
        })
        .collect()
}

pub fn dispatch(command: &crate::Command) -> CmdResult {
    use crate::Command as C;
    match command {
        C::Sample(a) => sample(a),
        C::Solve(a) => solve(a),
        C::Transform(a) => transform(a),
        C::Stats(a) => stats(a),
        C::Sweep(a) => sweep(a),
        C::THalf(a) => t_half(a),
        C::Experiment(a) => experiment(a),
        C::Verify(a) => verify(a),
    }
}

#[derive(Debug, Args, Serialize)]
pub struct SampleArgs {
    /// Grid side (bipartite part size)
    #[arg(long)]
    pub n: usize,
    /// Pebbles, for a configuration
    #[arg(long)]
    pub t: Option<u64>,
    /// Random graph model instead of a configuration: A, B or B'
    #[arg(long)]
    pub model: Option<String>,
    /// Total edge multiplicity; A and B use M = round(mq) and p = M/N
    #[arg(long)]
    pub m: Option<u64>,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[command(flatten)]
    #[serde(flatten)]
    pub output: Output,
}

fn sample(a: &SampleArgs) -> CmdResult {
    let graph = RookGraph::new(a.n)?;
    let csv = a.output.format == Some(Format::Csv);
    let content = match (&a.model, a.t, a.m) {
        (None, Some(t), None) => {
            let config = RookConfig::new(
                graph,
                sample_configuration(graph.vertex_count(), t, a.seed)?,
            )?;
            if csv {
                let mut s = String::new();
                for r in 1..=a.n {
                    let row: Vec<String> = (1..=a.n)
                        .map(|c| config.count(GridVertex::new(r, c)).to_string())
                        .collect();
                    writeln!(s, "{}", row.join(",")).expect("string write");
                }
                s
            } else {
                config.to_json() + "\n"
            }
        }
        (Some(model), None, Some(m)) => {
            let slots = graph.vertex_count();
            let simple_edges =
                (SupportLaw::new(slots as u64, m)?.mean_f64().round() as usize).min(slots);
            let params = ModelParams {
                n: a.n,
                p: simple_edges as f64 / slots as f64,
                simple_edges,
                multi_edges: m,
            };
            let g = ModelRegistry::default()
                .create(model, &params)?
                .sample(a.n, &mut rng::seeded(a.seed));
            if csv {
                let mut s = String::from("i,j,multiplicity\n");
                for ((i, j), k) in g.edges() {
                    writeln!(s, "{i},{j},{k}").expect("string write");
                }
                s
            } else {
                g.to_json() + "\n"
            }
        }
        _ => {
            return Err(usage(
                "give either --t for a configuration, or --model with --m for a graph",
            ))
        }
    };
    emit(&a.output, "sample", a, a.seed, &content)
}

#[derive(Debug, Args, Serialize)]
pub struct SolveArgs {
    /// Grid side; required when the file lists raw counts
    #[arg(long)]
    pub n: Option<usize>,
    /// JSON file: {"n": n, "pebbles": [[row, col, count], ...]} or {"n_vertices": N, "counts": [...]}
    #[arg(long)]
    pub config: PathBuf,
    /// Target root as "row,col"; all roots when absent
    #[arg(long)]
    pub root: Option<GridVertex>,
    /// State budget of the exhaustive tier, per root
    #[arg(long)]
    pub budget: Option<usize>,
    /// Comma-separated tier order
    #[arg(long)]
    pub tiers: Option<String>,
    /// Accepted for uniformity; solving is deterministic
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[command(flatten)]
    #[serde(flatten)]
    pub output: Output,
}

fn read_config(path: &PathBuf, n: Option<usize>) -> Result<RookConfig, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Runtime(format!("{}: {e}", path.display())))?;
    let config = match RookConfig::from_json(&text) {
        Ok(c) => c,
        Err(first) => {
            let Ok(raw) = PebbleConfiguration::from_json(&text) else {
                return Err(CliError::Runtime(format!("{}: {first}", path.display())));
            };
            let side = n.unwrap_or_else(|| (raw.vertex_count() as f64).sqrt().round() as usize);
            RookConfig::new(RookGraph::new(side)?, raw)?
        }
    };
    if let Some(n) = n {
        if n != config.n() {
            return Err(usage(format!(
                "--n {n} does not match the configuration's n = {}",
                config.n()
            )));
        }
    }
    Ok(config)
}

fn solve(a: &SolveArgs) -> CmdResult {
    let config = read_config(&a.config, a.n)?;
    if let Some(root) = a.root {
        if !config.graph().contains(root) {
            return Err(usage(format!(
                "root {root} is off the {0}x{0} grid",
                config.n()
            )));
        }
    }
    let options = TierOptions {
        exact_budget: a.budget.unwrap_or(DEFAULT_STATE_BUDGET),
        ..TierOptions::default()
    };
    let names: Vec<String> = match &a.tiers {
        Some(list) => parse_list("tiers", list)?,
        None => DEFAULT_TIER_ORDER.iter().map(|s| s.to_string()).collect(),
    };
    let solver = TieredSolver::from_names(&TierRegistry::default(), &names, &options)?;
    let verdict = solver.solve(&config, a.root);
    emit(&a.output, "solve", a, a.seed, &(verdict.to_json() + "\n"))
}

#[derive(Debug, Args, Serialize)]
#[command(group(ArgGroup::new("input").required(true).args(["config", "multigraph"])))]
pub struct TransformArgs {
    /// Configuration JSON to turn into a multigraph
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Multigraph JSON ({"n": n, "edges": [[i, j, k], ...]}) to turn into a configuration
    #[arg(long)]
    pub multigraph: Option<PathBuf>,
    #[arg(long)]
    pub n: Option<usize>,
    /// Accepted for uniformity; the transform is deterministic
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[command(flatten)]
    #[serde(flatten)]
    pub output: Output,
}

fn transform(a: &TransformArgs) -> CmdResult {
    let content = match (&a.config, &a.multigraph) {
        (Some(path), None) => config_to_multigraph(&read_config(path, a.n)?).to_json(),
        (None, Some(path)) => {
            let text = fs::read_to_string(path)
                .map_err(|e| CliError::Runtime(format!("{}: {e}", path.display())))?;
            let g = BipartiteMultigraph::from_json(&text)
                .map_err(|e| CliError::Runtime(e.to_string()))?;
            multigraph_to_config(&g).to_json()
        }
        _ => return Err(usage("give exactly one of --config and --multigraph")),
    };
    emit(&a.output, "transform", a, a.seed, &(content + "\n"))
}

#[derive(Debug, Args, Serialize)]
pub struct StatsArgs {
    /// Number of edge slots (n^2 for K_{n,n})
    #[arg(long = "N")]
    pub slots: u64,
    /// Total edge multiplicity
    #[arg(long)]
    pub m: u64,
    /// Floating-point (log-gamma) path only; for N too large for exact arithmetic
    #[arg(long)]
    pub float: bool,
    /// Also sample the support and report Pr[|Z - mq| <= epsilon mq]; N must be a square
    #[arg(long)]
    pub epsilon: Option<f64>,
    #[arg(long, default_value_t = 10_000)]
    pub trials: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[command(flatten)]
    #[serde(flatten)]
    pub output: Output,
}

#[derive(Serialize)]
struct PmfRow {
    s: u64,
    pmf: Option<String>,
    cumulative: Option<String>,
    pmf_float: f64,
    cumulative_float: f64,
}

#[derive(Serialize)]
struct StatsReport {
    #[serde(rename = "N")]
    slots: u64,
    m: u64,
    q: String,
    mean: Option<String>,
    variance: Option<String>,
    mean_float: f64,
    variance_float: Option<f64>,
    pmf: Vec<PmfRow>,
    #[serde(skip_serializing_if = "Option::is_none")]
    concentration: Option<Concentration>,
}

#[derive(Serialize)]
struct Concentration {
    epsilon: f64,
    trials: usize,
    seed: u64,
    fraction: f64,
    chebyshev_floor: Option<f64>,
}

fn opt(x: Option<f64>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

fn stats(a: &StatsArgs) -> CmdResult {
    let law = SupportLaw::new(a.slots, a.m)?;
    let exact = !a.float;
    let mut pmf = Vec::new();
    let mut cum = BigRational::zero();
    let mut cum_f = 0.0;
    for s in law.range() {
        let row = if exact {
            let p = law.pmf(s);
            cum += &p;
            PmfRow {
                s,
                pmf_float: support::to_f64(&p),
                cumulative_float: support::to_f64(&cum),
                pmf: Some(p.to_string()),
                cumulative: Some(cum.to_string()),
            }
        } else {
            let p = law.pmf_f64(s);
            cum_f += p;
            PmfRow {
                s,
                pmf: None,
                cumulative: None,
                pmf_float: p,
                cumulative_float: cum_f,
            }
        };
        pmf.push(row);
    }
    let concentration = match a.epsilon {
        None => None,
        Some(eps) => {
            let n = (a.slots as f64).sqrt().round() as usize;
            if (n * n) as u64 != a.slots {
                return Err(usage(
                    "--epsilon samples K_{n,n}, so --N must be a perfect square",
                ));
            }
            let fraction = support::concentration_check(n, a.m, eps, a.trials, a.seed)?;
            Some(Concentration {
                epsilon: eps,
                trials: a.trials,
                seed: a.seed,
                fraction,
                chebyshev_floor: support::chebyshev_floor(&law, eps).ok(),
            })
        }
    };
    let report = StatsReport {
        slots: a.slots,
        m: a.m,
        q: law.q().to_string(),
        mean: exact.then(|| law.mean().to_string()),
        variance: if exact {
            law.variance().ok().map(|v| v.to_string())
        } else {
            None
        },
        mean_float: law.mean_f64(),
        variance_float: law.variance_f64().ok(),
        pmf,
        concentration,
    };
    let content = match a.output.format.unwrap_or(Format::Csv) {
        Format::Json => json(&report),
        Format::Csv => {
            let mut s = String::from("N,m,s,pmf,cumulative,pmf_float,cumulative_float\n");
            for r in &report.pmf {
                writeln!(
                    s,
                    "{},{},{},{},{},{},{}",
                    a.slots,
                    a.m,
                    r.s,
                    r.pmf.as_deref().unwrap_or(""),
                    r.cumulative.as_deref().unwrap_or(""),
                    r.pmf_float,
                    r.cumulative_float
                )
                .expect("string write");
            }
            s += "N,m,mean,variance,mean_float,variance_float\n";
            writeln!(
                s,
                "{},{},{},{},{},{}",
                a.slots,
                a.m,
                report.mean.as_deref().unwrap_or(""),
                report.variance.as_deref().unwrap_or(""),
                report.mean_float,
                opt(report.variance_float)
            )
            .expect("string write");
            if let Some(c) = &report.concentration {
                s += "epsilon,trials,seed,fraction,chebyshev_floor\n";
                writeln!(
                    s,
                    "{},{},{},{},{}",
                    c.epsilon,
                    c.trials,
                    c.seed,
                    c.fraction,
                    opt(c.chebyshev_floor)
                )
                .expect("string write");
            }
            s
        }
    };
    emit(&a.output, "stats", a, a.seed, &content)
}

#[derive(Debug, Args, Serialize)]
pub struct SweepArgs {
    /// Comma-separated grid sides
    #[arg(long)]
    pub n: String,
    /// "auto" for geometric grids from n/16 to 16n, or a comma-separated list used for every n
    #[arg(long, default_value = "auto")]
    pub t: String,
    #[arg(long, default_value_t = 1000)]
    pub trials: u64,
    /// Enumerate every configuration and solve each exactly (small grids only)
    #[arg(long)]
    pub exact: bool,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[command(flatten)]
    #[serde(flatten)]
    pub output: Output,
}

fn sweep(a: &SweepArgs) -> CmdResult {
    let ns: Vec<usize> = parse_list("n", &a.n)?;
    let grids: Vec<Vec<u64>> = if a.t == "auto" {
        ns.iter().map(|&n| lab::default_t_grid(n)).collect()
    } else {
        let ts: Vec<u64> = parse_list("t", &a.t)?;
        vec![ts; ns.len()]
    };
    let records = if a.exact {
        let mut out = Vec::new();
        for (&n, grid) in ns.iter().zip(&grids) {
            for &t in grid {
                out.push(lab::exact_record(n, t, a.seed)?);
            }
        }
        out
    } else {
        lab::sweep(&ns, &grids, a.trials, a.seed)?
    };
    let content = match a.output.format.unwrap_or(Format::Csv) {
        Format::Csv => lab::to_csv(&records),
        Format::Json => json(&records),
    };
    emit(&a.output, "sweep", a, a.seed, &content)
}

#[derive(Debug, Args, Serialize)]
pub struct THalfArgs {
    /// Comma-separated grid sides
    #[arg(long)]
    pub n: String,
    #[arg(long, default_value_t = 1000)]
    pub trials: u64,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Stop bisecting once the bracket is this narrow
    #[arg(long, default_value_t = 1)]
    pub tolerance: u64,
    #[command(flatten)]
    #[serde(flatten)]
    pub output: Output,
}

fn t_half(a: &THalfArgs) -> CmdResult {
    let ns: Vec<usize> = parse_list("n", &a.n)?;
    let content = if a.tolerance == 1 {
        let report = lab::scaling_report(&ns, a.trials, a.seed)?;
        match a.output.format.unwrap_or(Format::Json) {
            Format::Json => json(&report),
            Format::Csv => {
                let mut s = String::from("n,N,t_half,ratio\n");
                for r in &report.rows {
                    writeln!(s, "{},{},{},{}", r.n, r.vertex_count, r.t_half, r.ratio)
                        .expect("string write");
                }
                s
            }
        }
    } else {
        let estimates = ns
            .iter()
            .map(|&n| lab::locate_t_half(n, a.trials, a.seed, a.tolerance))
            .collect::<pebblelab::Result<Vec<_>>>()?;
        match a.output.format.unwrap_or(Format::Json) {
            Format::Json => json(&estimates),
            Format::Csv => {
                let mut s = String::from("n,N,t_half\n");
                for e in &estimates {
                    writeln!(s, "{},{},{}", e.n, e.n * e.n, e.t_half).expect("string write");
                }
                s
            }
        }
    };
    emit(&a.output, "t-half", a, a.seed, &content)
}

#[derive(Debug, Args, Serialize)]
pub struct ExperimentArgs {
    /// transfer, police or path
    pub kind: String,
    #[arg(long)]
    pub n: usize,
    /// Edge multiplicity; defaults to 4n (transfer) or ceil(n ln n) (police)
    #[arg(long)]
    pub m: Option<u64>,
    #[arg(long, default_value_t = 1000)]
    pub trials: u64,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Component fraction; transfer defaults to 1/2, police to q/4
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Average degree of the path experiment's graph, above ln 16
    #[arg(long, default_value_t = 6.0)]
    pub beta: f64,
    /// Transfer property: largest-component, contains-path or cop-pair
    #[arg(long, default_value = "largest-component")]
    pub property: String,
    /// Path length for the contains-path property
    #[arg(long, default_value_t = 0)]
    pub length: usize,
    #[command(flatten)]
    #[serde(flatten)]
    pub output: Output,
}

fn experiment(a: &ExperimentArgs) -> CmdResult {
    let registry = ExperimentRegistry::default();
    let exp = registry.get(&a.kind)?;
    if a.output.format == Some(Format::Csv) {
        return Err(usage("experiment reports are JSON only"));
    }
    let m = a.m.unwrap_or(match a.kind.as_str() {
        "police" => (a.n as f64 * (a.n as f64).ln()).ceil() as u64,
        _ => 4 * a.n as u64,
    });
    let params = ExperimentParams {
        n: a.n,
        m,
        trials: a.trials,
        seed: a.seed,
        alpha: a.alpha,
        beta: a.beta,
        property: a.property.clone(),
        path_length: a.length,
    };
    let report = exp.run(&params)?;
    emit(&a.output, "experiment", a, a.seed, &json(&report))
}

#[derive(Debug, Args, Serialize)]
pub struct VerifyArgs {
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[command(flatten)]
    #[serde(flatten)]
    pub output: Output,
}

/// Quick invariant checks, one line each.
fn verify(a: &VerifyArgs) -> CmdResult {
    let checks: Vec<(&str, Result<bool, CliError>)> = vec![
        (
            "rook's graph is the line graph of K_{n,n}, n <= 6",
            (1..=6).try_fold(true, |ok, n| Ok(ok && verify_line_graph_iso(n)?)),
        ),
        (
            "support law matches enumeration, N, m <= 7",
            verify_support_law(),
        ),
        (
            "tiered solver agrees with exhaustive search on the 2x2 grid",
            verify_tiers(),
        ),
        ("catch plans replay", verify_plans(a.seed)),
        ("configuration sampler is uniform", verify_sampler(a.seed)),
    ];
    let mut report = String::new();
    let mut failed = 0;
    for (name, result) in checks {
        let status = match result {
            Ok(true) => "PASS",
            Ok(false) => "FAIL",
            Err(CliError::Usage(e) | CliError::Runtime(e)) => {
                writeln!(report, "[FAIL] {name}: {e}").expect("string write");
                failed += 1;
                continue;
            }
        };
        failed += usize::from(status == "FAIL");
        writeln!(report, "[{status}] {name}").expect("string write");
    }
    emit(&a.output, "verify", a, a.seed, &report)?;
    if failed > 0 {
        return Err(CliError::Runtime(format!("{failed} check(s) failed")));
    }
    Ok(())
}

fn verify_support_law() -> Result<bool, CliError> {
    for slots in 1..=7u64 {
        for m in 1..=7u64 {
            let law = SupportLaw::new(slots, m)?;
            let mut hist = vec![0i64; (slots.min(m) + 1) as usize];
            for c in enumerate_configurations(slots as usize, m, DEFAULT_ENUMERATION_CAP)? {
                hist[c.occupied().count()] += 1;
            }
            let total: i64 = hist.iter().sum();
            for (s, &h) in hist.iter().enumerate() {
                if law.pmf(s as u64) != BigRational::new(h.into(), total.into()) {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

fn verify_tiers() -> Result<bool, CliError> {
    let graph = RookGraph::new(2)?;
    let simple = graph.to_simple_graph();
    let exact = ExactSolver::new(&simple)?;
    let solver = TieredSolver::default();
    for t in 0..=8 {
        for config in enumerate_configurations(4, t, DEFAULT_ENUMERATION_CAP)? {
            let truth = exact.solvable(&config)?;
            let verdict = solver.solve(&RookConfig::new(graph, config)?, None);
            if verdict.is_unknown() || verdict.is_solvable() != truth {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

fn verify_plans(seed: u64) -> Result<bool, CliError> {
    for i in 0..500u64 {
        let s = rng::derive_seed(seed, &[i]);
        let n = 2 + (s % 7) as usize;
        let t = 1 + (s >> 8) % (3 * (n * n) as u64 + 1);
        let config = RookConfig::new(RookGraph::new(n)?, sample_configuration(n * n, t, s)?)?;
        let root = config.graph().vertex(((s >> 32) % (n * n) as u64) as usize);
        if let Some(plan) = catch_plan(&config, root) {
            if !plan.catches(&config, root) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

fn verify_sampler(seed: u64) -> Result<bool, CliError> {
    let all: Vec<PebbleConfiguration> =
        enumerate_configurations(4, 3, DEFAULT_ENUMERATION_CAP)?.collect();
    let mut observed = vec![0u64; all.len()];
    for i in 0..20_000u64 {
        let c = sample_configuration(4, 3, rng::derive_seed(seed, &[i]))?;
        observed[all
            .iter()
            .position(|a| *a == c)
            .expect("sample is a valid multiset")] += 1;
    }
    Ok(chi_square_uniform_p_value(&observed) > 0.001)
}
