//! Monte Carlo solvability sweeps and threshold location.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::stats::{isotonic_increasing, wilson_interval, Z_95};
use crate::config::PebbleConfiguration;
use crate::error::{Error, Result};
use crate::exact::ExactSolver;
use crate::rng;
use crate::rook::{RookConfig, RookGraph, TieredSolver};
use crate::space::{
    configuration_count, enumerate_configurations, sample_counts_into, DEFAULT_ENUMERATION_CAP,
};

/// Solvability estimate at one `(n, t)`.
///
/// Unknown verdicts are never guessed: `solvable_lower` counts them as
/// unsolvable and `solvable_upper` as solvable.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRecord {
    pub n: usize,
    #[serde(rename = "N")]
    pub vertex_count: usize,
    pub t: u64,
    pub trials: u64,
    pub solvable_lower: f64,
    pub solvable_upper: f64,
    pub unknown_rate: f64,
    /// Wilson interval on `solvable_lower`
    pub ci_low: f64,
    pub ci_high: f64,
    pub seed: u64,
}

pub const CSV_HEADER: &str =
    "n,N,t,trials,solvable_lower,solvable_upper,unknown_rate,ci_low,ci_high,seed";

impl SweepRecord {
    fn from_counts(n: usize, t: u64, trials: u64, solvable: u64, unknown: u64, seed: u64) -> Self {
        let lower = solvable as f64 / trials as f64;
        let upper = (solvable + unknown) as f64 / trials as f64;
        let (ci_low, ci_high) = wilson_interval(solvable, trials);
        Self {
            n,
            vertex_count: n * n,
            t,
            trials,
            solvable_lower: lower,
            solvable_upper: upper,
            unknown_rate: unknown as f64 / trials as f64,
            ci_low,
            ci_high,
            seed,
        }
    }

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{}",
            self.n,
            self.vertex_count,
            self.t,
            self.trials,
            self.solvable_lower,
            self.solvable_upper,
            self.unknown_rate,
            self.ci_low,
            self.ci_high,
            self.seed
        )
    }
}

pub fn to_csv(records: &[SweepRecord]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in records {
        writeln!(out, "{}", r.csv_row()).expect("writing to a String");
    }
    out
}

/// Estimate with the default tiers.
pub fn estimate_solvability(n: usize, t: u64, trials: u64, seed: u64) -> Result<SweepRecord> {
    estimate_solvability_with(&TieredSolver::default(), n, t, trials, seed)
}

/// Judges `trials` uniform configurations in all-roots mode. Trial `i` draws
/// from a seed derived from `(seed, n, t, i)`, so the record does not depend on
/// how rayon schedules the trials.
pub fn estimate_solvability_with(
    solver: &TieredSolver,
    n: usize,
    t: u64,
    trials: u64,
    seed: u64,
) -> Result<SweepRecord> {
    if trials == 0 {
        return Err(Error::InvalidDomain("at least one trial is needed".into()));
    }
    let graph = RookGraph::new(n)?;
    let (solvable, unknown) = (0..trials)
        .into_par_iter()
        .map_init(Vec::new, |counts, i| {
            let mut rng = rng::seeded(rng::derive_seed(seed, &[n as u64, t, i]));
            sample_counts_into(&mut rng, graph.vertex_count(), t, counts);
            let config = RookConfig::new(graph, PebbleConfiguration::new(counts.clone()))
                .expect("sampled counts match the grid");
            let verdict = solver.solve(&config, None);
            (
                u64::from(verdict.is_solvable()),
                u64::from(verdict.is_unknown()),
            )
        })
        .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1));
    Ok(SweepRecord::from_counts(
        n, t, trials, solvable, unknown, seed,
    ))
}

/// Exact fraction of solvable configurations of `t` pebbles on `K_n □ K_n`.
pub fn exact_probability(n: usize, t: u64) -> Result<BigRational> {
    let graph = RookGraph::new(n)?;
    let simple = graph.to_simple_graph();
    let solver = ExactSolver::new(&simple)?;
    let mut session = solver.session();
    let total = configuration_count(graph.vertex_count() as u64, t)?;
    let mut solvable = 0u64;
    for config in enumerate_configurations(graph.vertex_count(), t, DEFAULT_ENUMERATION_CAP)? {
        if session.solvable(&config)? {
            solvable += 1;
        }
    }
    Ok(BigRational::new(
        BigInt::from(solvable),
        BigInt::from(total),
    ))
}

/// A record holding the exact value instead of an estimate: `trials` is the
/// number of configurations and both brackets and the interval collapse onto
/// the exact fraction.
pub fn exact_record(n: usize, t: u64, seed: u64) -> Result<SweepRecord> {
    let p = exact_probability(n, t)?;
    // enumeration succeeded, so the count is under the cap
    let trials =
        u64::try_from(&configuration_count((n * n) as u64, t)?).expect("count below the cap");
    let value = p.to_f64().unwrap_or(f64::NAN);
    Ok(SweepRecord {
        n,
        vertex_count: n * n,
        t,
        trials,
        solvable_lower: value,
        solvable_upper: value,
        unknown_rate: 0.0,
        ci_low: value,
        ci_high: value,
        seed,
    })
}

/// Geometric grid `t = n * 2^(k/2)`, `k = -8..=8`, spanning `n/16` to `16n`,
/// clipped to `[1, 3N + 1]`.
pub fn default_t_grid(n: usize) -> Vec<u64> {
    let ceiling = 3 * (n * n) as u64 + 1;
    let mut grid: Vec<u64> = (-8..=8)
        .map(|k| ((n as f64) * 2f64.powf(f64::from(k) / 2.0)).round() as u64)
        .map(|t| t.clamp(1, ceiling))
        .collect();
    grid.dedup();
    grid
}

/// One record per `(n, t)`, in the order given.
pub fn sweep(ns: &[usize], grids: &[Vec<u64>], trials: u64, seed: u64) -> Result<Vec<SweepRecord>> {
    if ns.len() != grids.len() {
        return Err(Error::InvalidDomain("one t grid per n is needed".into()));
    }
    let solver = TieredSolver::default();
    let mut out = Vec::new();
    for (&n, grid) in ns.iter().zip(grids) {
        for &t in grid {
            out.push(estimate_solvability_with(&solver, n, t, trials, seed)?);
        }
    }
    Ok(out)
}

/// Isotonic fit of `solvable_lower` over records sorted by `t`, weighted by trials.
pub fn smoothed_lower(records: &[SweepRecord]) -> Vec<(u64, f64)> {
    let mut sorted: Vec<&SweepRecord> = records.iter().collect();
    sorted.sort_by_key(|r| r.t);
    let values: Vec<f64> = sorted.iter().map(|r| r.solvable_lower).collect();
    let weights: Vec<f64> = sorted.iter().map(|r| r.trials as f64).collect();
    sorted
        .iter()
        .map(|r| r.t)
        .zip(isotonic_increasing(&values, &weights))
        .collect()
}

/// Result of [`locate_t_half`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ThresholdEstimate {
    pub n: usize,
    pub t_half: u64,
    /// every point evaluated during the search, sorted by `t`
    pub points: Vec<SweepRecord>,
    /// the isotonic fit over `points`
    pub smoothed: Vec<(u64, f64)>,
}

impl ThresholdEstimate {
    pub fn smoothed_at(&self, t: u64) -> Option<f64> {
        self.smoothed.iter().find(|p| p.0 == t).map(|p| p.1)
    }
}

/// Smallest `t` whose smoothed `solvable_lower` is at least 1/2.
///
/// Bisection over `[1, 3N + 1]`. After each new evaluation the isotonic fit is
/// recomputed over all evaluated points and the bracket is re-read from it, so
/// at the end the fit is below 1/2 at the previous evaluated point and at least
/// 1/2 at `t_half`. With `tolerance = 1` the previous point is `t_half - 1`.
pub fn locate_t_half(
    n: usize,
    trials: u64,
    seed: u64,
    tolerance: u64,
) -> Result<ThresholdEstimate> {
    locate_t_half_with(&TieredSolver::default(), n, trials, seed, tolerance)
}

pub fn locate_t_half_with(
    solver: &TieredSolver,
    n: usize,
    trials: u64,
    seed: u64,
    tolerance: u64,
) -> Result<ThresholdEstimate> {
    if 2.0 * Z_95 * (0.25 / trials as f64).sqrt() >= 0.2 {
        return Err(Error::InvalidDomain(format!(
            "{trials} trials leave the interval at 1/2 wider than 0.2"
        )));
    }
    if tolerance == 0 {
        return Err(Error::InvalidDomain("tolerance must be at least 1".into()));
    }
    let ceiling = 3 * (n * n) as u64 + 1;
    let mut points: BTreeMap<u64, SweepRecord> = BTreeMap::new();
    for t in [1, ceiling] {
        points.insert(t, estimate_solvability_with(solver, n, t, trials, seed)?);
    }
    loop {
        let records: Vec<SweepRecord> = points.values().cloned().collect();
        let smoothed = smoothed_lower(&records);
        let Some(idx) = smoothed.iter().position(|&(_, p)| p >= 0.5) else {
            return Err(Error::NoCrossing { lo: 1, hi: ceiling });
        };
        let hi = smoothed[idx].0;
        let done = |t_half| {
            Ok(ThresholdEstimate {
                n,
                t_half,
                points: records.clone(),
                smoothed: smoothed.clone(),
            })
        };
        if idx == 0 {
            return done(hi);
        }
        let lo = smoothed[idx - 1].0;
        if hi - lo <= tolerance {
            return done(hi);
        }
        let mid = lo + (hi - lo) / 2;
        points.insert(
            mid,
            estimate_solvability_with(solver, n, mid, trials, seed)?,
        );
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScalingRow {
    pub n: usize,
    #[serde(rename = "N")]
    pub vertex_count: usize,
    pub t_half: u64,
    /// `t_half / sqrt(N)`, which is `t_half / n`
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScalingReport {
    pub rows: Vec<ScalingRow>,
    /// largest ratio over smallest ratio
    pub max_over_min: f64,
    /// whether `t_half` strictly increases along `n_list`
    pub increasing: bool,
    pub trials: u64,
    pub seed: u64,
}

/// `t_half / sqrt(N)` across grid sizes.
pub fn scaling_report(ns: &[usize], trials: u64, seed: u64) -> Result<ScalingReport> {
    let solver = TieredSolver::default();
    let rows = ns
        .iter()
        .map(|&n| {
            let est = locate_t_half_with(&solver, n, trials, seed, 1)?;
            Ok(ScalingRow {
                n,
                vertex_count: n * n,
                t_half: est.t_half,
                ratio: est.t_half as f64 / n as f64,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let max = rows
        .iter()
        .map(|r| r.ratio)
        .fold(f64::NEG_INFINITY, f64::max);
    let min = rows.iter().map(|r| r.ratio).fold(f64::INFINITY, f64::min);
    let increasing = rows.windows(2).all(|w| w[0].t_half < w[1].t_half);
    Ok(ScalingReport {
        max_over_min: if rows.is_empty() { 1.0 } else { max / min },
        increasing,
        rows,
        trials,
        seed,
    })
}
