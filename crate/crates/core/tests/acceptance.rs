//! Acceptance suite. Runs every criterion at full size, prints one PASS/FAIL
//! line each, and exits non-zero if any failed.
//!
//! Run alone with `cargo test -p pebblelab --test acceptance`.

use std::process::ExitCode;
use std::time::Instant;

use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;

use pebblelab::bipartite::{config_to_multigraph, sample_multigraph, BipartiteMultigraph};
use pebblelab::exact::ExactSolver;
use pebblelab::lab::experiments::LargestComponentFraction;
use pebblelab::lab::stats::chi_square_uniform_p_value;
use pebblelab::lab::{
    default_t_grid, estimate_solvability, exact_probability, locate_t_half,
    model_transfer_experiment, path_experiment, police_component_experiment, smoothed_lower,
};
use pebblelab::rng;
use pebblelab::rook::{
    catch_plan, direct_catch, has_police_component, has_robocop, RookConfig, RookGraph,
    TieredSolver, Verdict,
};
use pebblelab::space::{
    configuration_count, enumerate_configurations, sample_configuration, DEFAULT_ENUMERATION_CAP,
};
use pebblelab::support::{sample_support_sizes, SupportLaw};
use pebblelab::PebbleConfiguration;

type Criterion = (&'static str, fn() -> Outcome);

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

/// Configurations for one `(n, t)`: every one when there are at most `limit`,
/// otherwise `limit` uniform samples.
fn configurations(n: usize, t: u64, limit: u64, seed: u64) -> Vec<PebbleConfiguration> {
    let vertices = n * n;
    let count = configuration_count(vertices as u64, t).unwrap();
    if count <= limit.into() {
        enumerate_configurations(vertices, t, DEFAULT_ENUMERATION_CAP)
            .unwrap()
            .collect()
    } else {
        (0..limit)
            .map(|i| {
                sample_configuration(vertices, t, rng::derive_seed(seed, &[n as u64, t, i]))
                    .unwrap()
            })
            .collect()
    }
}

/// Every configuration the sufficient conditions call solvable is solvable.
fn sufficient_conditions_are_sound() -> Outcome {
    let mut checked = 0u64;
    let mut violations = 0u64;
    for n in [2usize, 3] {
        let graph = RookGraph::new(n).unwrap();
        let simple = graph.to_simple_graph();
        let solver = ExactSolver::new(&simple).unwrap();
        let mut session = solver.session();
        for t in 1..=3 * (n * n) as u64 + 1 {
            for config in configurations(n, t, 20_000, 1) {
                let config = RookConfig::new(graph, config).unwrap();
                let all_direct = graph.vertices().all(|r| direct_catch(&config, r));
                if has_police_component(&config) || has_robocop(&config) || all_direct {
                    checked += 1;
                    if !session.solvable(config.config()).unwrap() {
                        violations += 1;
                    }
                }
            }
        }
    }
    outcome(
        violations == 0,
        format!("{checked} flagged configurations, {violations} violations"),
    )
}

fn plans_replay() -> Outcome {
    let mut rng = rng::seeded(2);
    let solver = TieredSolver::default();
    let (mut plans, mut failures) = (0u32, 0u32);
    while plans < 10_000 {
        let n = rng.random_range(2..=10);
        let t = rng.random_range(1..=3 * (n * n) as u64 + 1);
        let config = RookConfig::new(
            RookGraph::new(n).unwrap(),
            sample_configuration(n * n, t, rng.random()).unwrap(),
        )
        .unwrap();
        let root = config.graph().vertex(rng.random_range(0..n * n));
        let from_tiers = match solver.solve(&config, Some(root)) {
            Verdict::Solvable { plan, .. } => plan,
            _ => None,
        };
        for plan in [catch_plan(&config, root), from_tiers]
            .into_iter()
            .flatten()
        {
            plans += 1;
            match plan.replay(&config) {
                Ok(end) if end.count(root) >= 1 => {}
                _ => failures += 1,
            }
        }
    }
    outcome(
        failures == 0,
        format!("{plans} plans replayed, {failures} failures"),
    )
}

fn support_law_is_exact() -> Outcome {
    let mut mismatches = Vec::new();
    for slots in 1..=12u64 {
        for edges in 1..=12u64 {
            let law = SupportLaw::new(slots, edges).unwrap();
            let mut hist = vec![0u64; (slots.min(edges) + 1) as usize];
            for c in
                enumerate_configurations(slots as usize, edges, DEFAULT_ENUMERATION_CAP).unwrap()
            {
                hist[c.occupied().count()] += 1;
            }
            let total = BigRational::from_integer(hist.iter().sum::<u64>().into());
            let moment = |k: u32| {
                hist.iter()
                    .enumerate()
                    .fold(BigRational::zero(), |acc, (s, &h)| {
                        acc + BigRational::from_integer((h * (s as u64).pow(k)).into())
                    })
                    / &total
            };
            let pmf_sum = law
                .range()
                .fold(BigRational::zero(), |acc, s| acc + law.pmf(s));
            let mq = BigRational::from_integer(edges.into())
                * BigRational::new(slots.into(), (slots + edges - 1).into());
            let (e1, e2) = (moment(1), moment(2));
            let mut ok = pmf_sum.is_one() && law.moment(1) == mq && e1 == mq && law.moment(2) == e2;
            if slots + edges >= 3 {
                ok &= law.variance().unwrap() == &e2 - &e1 * &e1;
            }
            if !ok {
                mismatches.push((slots, edges));
            }
        }
    }
    outcome(
        mismatches.is_empty(),
        format!("144 (N, m) pairs, mismatches {mismatches:?}"),
    )
}

fn support_concentrates() -> Outcome {
    let (n, m, trials) = (30usize, 300u64, 100_000usize);
    let law = SupportLaw::new((n * n) as u64, m).unwrap();
    let samples = sample_support_sizes(n, m, trials, 4).unwrap();
    let mean = samples.iter().sum::<u64>() as f64 / trials as f64;
    let var = samples
        .iter()
        .map(|&z| (z as f64 - mean).powi(2))
        .sum::<f64>()
        / (trials - 1) as f64;
    let exact_var = law.variance_f64().unwrap();
    let mean_ok = (mean - law.mean_f64()).abs() <= 4.0 * (exact_var / trials as f64).sqrt();
    let var_ok = (var - exact_var).abs() <= 0.1 * exact_var;
    outcome(
        mean_ok && var_ok,
        format!(
            "mean {mean:.4} vs mq {:.4}; variance {var:.4} vs {exact_var:.4}",
            law.mean_f64()
        ),
    )
}

fn monte_carlo_matches_exact() -> Outcome {
    let mut worst = 0f64;
    let mut unknown = 0f64;
    for t in 1..=12 {
        let exact = pebblelab::support::to_f64(&exact_probability(2, t).unwrap());
        let r = estimate_solvability(2, t, 100_000, 5).unwrap();
        worst = worst.max((r.solvable_lower - exact).abs());
        unknown = unknown.max(r.unknown_rate);
    }
    outcome(
        worst <= 0.01 && unknown == 0.0,
        format!("max |error| {worst:.4}, max unknown rate {unknown}"),
    )
}

fn threshold_collapses() -> Outcome {
    let ns = [16usize, 32, 64, 128];
    let mut ratios = Vec::new();
    let mut detail = String::new();
    for &n in &ns {
        match locate_t_half(n, 1000, 6, 1) {
            Ok(est) => {
                ratios.push(est.t_half as f64 / n as f64);
                detail += &format!("n={n}: t½={} ", est.t_half);
            }
            Err(e) => return outcome(false, format!("n={n}: {e}")),
        }
    }
    let max = ratios.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = ratios.iter().copied().fold(f64::INFINITY, f64::min);
    let n = 128usize;
    let (low_t, high_t) = (n.div_ceil(16) as u64, 16 * n as u64);
    // the geometric grid runs from n/16 to 16n, so both tail points are on it
    let grid = default_t_grid(n);
    assert!(grid.contains(&low_t) && grid.contains(&high_t));
    let records: Vec<_> = grid
        .iter()
        .map(|&t| estimate_solvability(n, t, 1000, 6).unwrap())
        .collect();
    let smoothed = smoothed_lower(&records);
    let at = |t| smoothed.iter().find(|p| p.0 == t).unwrap().1;
    let pass = max / min <= 2.0 && at(high_t) >= 0.9 && at(low_t) <= 0.1;
    detail += &format!(
        "max/min {:.3}; P(t={high_t}) {:.3}; P(t={low_t}) {:.3}",
        max / min,
        at(high_t),
        at(low_t)
    );
    outcome(pass, detail)
}

fn police_components_appear() -> Outcome {
    let n = 128usize;
    let m = (n as f64 * (n as f64).ln()).ceil() as u64;
    let r = police_component_experiment(n, m, None, 200, 7).unwrap();
    let excess_ok = (r.mean_excess - r.expected_excess).abs() <= 0.05 * r.expected_excess;
    outcome(
        r.freq_police >= 0.9 && excess_ok,
        format!(
            "m={m}: police {:.3}; mean excess {:.3} vs {:.3}",
            r.freq_police, r.mean_excess, r.expected_excess
        ),
    )
}

fn long_paths_exist() -> Outcome {
    let r = path_experiment(256, 6.0, 50, 8).unwrap();
    outcome(
        r.bound == 276 && r.fraction >= 0.9,
        format!(
            "bound {}; fraction {:.2}; mean {:.1}; min {}",
            r.bound, r.fraction, r.mean_length, r.min_length
        ),
    )
}

fn models_agree() -> Outcome {
    let n = 64;
    let r = model_transfer_experiment(
        n,
        4 * n as u64,
        &LargestComponentFraction { alpha: 0.5 },
        2000,
        9,
    )
    .unwrap();
    let d = r.max_pairwise_difference();
    outcome(
        d <= 0.05,
        format!(
            "M={}; frequencies {:?}; max difference {d:.4}",
            r.simple_edges, r.frequency
        ),
    )
}

fn samplers_are_uniform() -> Outcome {
    let all: Vec<PebbleConfiguration> = enumerate_configurations(4, 3, DEFAULT_ENUMERATION_CAP)
        .unwrap()
        .collect();
    let mut observed = vec![0u64; all.len()];
    for i in 0..100_000u64 {
        let c = sample_configuration(4, 3, rng::derive_seed(10, &[i])).unwrap();
        observed[all.iter().position(|a| *a == c).unwrap()] += 1;
    }
    let p_configs = chi_square_uniform_p_value(&observed);

    let graph = RookGraph::new(2).unwrap();
    let graphs: Vec<BipartiteMultigraph> = enumerate_configurations(4, 2, DEFAULT_ENUMERATION_CAP)
        .unwrap()
        .map(|c| config_to_multigraph(&RookConfig::new(graph, c).unwrap()))
        .collect();
    let mut observed = vec![0u64; graphs.len()];
    for i in 0..100_000u64 {
        let g = sample_multigraph(2, 2, rng::derive_seed(11, &[i])).unwrap();
        observed[graphs.iter().position(|a| *a == g).unwrap()] += 1;
    }
    let p_graphs = chi_square_uniform_p_value(&observed);
    outcome(
        all.len() == 20 && graphs.len() == 10 && p_configs > 0.001 && p_graphs > 0.001,
        format!("configurations p = {p_configs:.4}; multigraphs p = {p_graphs:.4}"),
    )
}

fn pigeonhole_forces_solvable() -> Outcome {
    let solver = TieredSolver::default();
    let mut solved = 0;
    for n in [4usize, 8] {
        let graph = RookGraph::new(n).unwrap();
        let t = 3 * (n * n) as u64 + 1;
        for i in 0..1000u64 {
            let c = RookConfig::new(
                graph,
                sample_configuration(n * n, t, rng::derive_seed(12, &[n as u64, i])).unwrap(),
            )
            .unwrap();
            solved += u32::from(solver.solve(&c, None).is_solvable());
        }
    }
    outcome(solved == 2000, format!("{solved}/2000 solvable"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 11] = [
        (
            "sufficient conditions are sound",
            sufficient_conditions_are_sound,
        ),
        ("catch plans replay", plans_replay),
        ("support law is exact", support_law_is_exact),
        ("support size concentrates", support_concentrates),
        (
            "Monte Carlo matches exact oracle",
            monte_carlo_matches_exact,
        ),
        ("threshold collapses on t/n", threshold_collapses),
        ("police components appear", police_components_appear),
        ("long DFS paths exist", long_paths_exist),
        ("random graph models agree", models_agree),
        ("samplers are uniform", samplers_are_uniform),
        ("pigeonhole ceiling is solvable", pigeonhole_forces_solvable),
    ];
    let filter: Vec<String> = std::env::args()
        .skip(1)
        .filter(|a| !a.starts_with('-'))
        .collect();
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let id = (i + 1).to_string();
        if !filter.is_empty() && !filter.contains(&id) {
            continue;
        }
        let start = Instant::now();
        let o = run();
        let status = if o.pass { "PASS" } else { "FAIL" };
        println!(
            "[{status}] criterion {id:>2}: {name} ({}; {:.1}s)",
            o.detail,
            start.elapsed().as_secs_f64()
        );
        failed += usize::from(!o.pass);
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criterion(s) failed");
        ExitCode::FAILURE
    }
}
