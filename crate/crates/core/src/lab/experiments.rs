//! Experiments on random bipartite (multi)graphs.
//!
//! Graph properties and whole experiments both sit behind traits with
//! name-keyed registries, so the command line can pick them at runtime.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::bipartite::{
    components_of, dfs_long_path, BipartiteMultigraph, ModelParams, ModelRegistry,
};
use crate::error::{Error, Result};
use crate::rng::{self, LabRng};
use crate::support::SupportLaw;

/// A property of a bipartite multigraph, judged on its support.
pub trait GraphProperty: Send + Sync {
    fn name(&self) -> String;

    /// Some properties are checked by a randomised witness search, hence the generator.
    fn holds(&self, graph: &BipartiteMultigraph, rng: &mut LabRng) -> bool;
}

/// The largest support component has at least `alpha * 2n` vertices.
#[derive(Debug, Clone, Copy)]
pub struct LargestComponentFraction {
    pub alpha: f64,
}

/// The support contains a path of at least `length` edges, as found by randomised DFS.
#[derive(Debug, Clone, Copy)]
pub struct ContainsPath {
    pub length: usize,
}

/// Some support component holds two or more edges of multiplicity at least two.
#[derive(Debug, Clone, Copy)]
pub struct CopPairInOneComponent;

impl GraphProperty for LargestComponentFraction {
    fn name(&self) -> String {
        format!("largest-component>={}", self.alpha)
    }

    fn holds(&self, graph: &BipartiteMultigraph, _rng: &mut LabRng) -> bool {
        let size = components_of(graph).largest().map_or(0, |c| c.size);
        size as f64 >= self.alpha * (2 * graph.n()) as f64
    }
}

impl GraphProperty for ContainsPath {
    fn name(&self) -> String {
        format!("contains-path>={}", self.length)
    }

    fn holds(&self, graph: &BipartiteMultigraph, rng: &mut LabRng) -> bool {
        dfs_long_path(&graph.support(), rng).len().saturating_sub(1) >= self.length
    }
}

impl GraphProperty for CopPairInOneComponent {
    fn name(&self) -> String {
        "cop-pair-in-one-component".into()
    }

    fn holds(&self, graph: &BipartiteMultigraph, _rng: &mut LabRng) -> bool {
        components_of(graph)
            .components
            .iter()
            .any(|c| c.cop_edge_count >= 2)
    }
}

/// Parameters property factories may read.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PropertyParams {
    pub alpha: f64,
    pub length: usize,
}

type PropertyFactory = Box<dyn Fn(&PropertyParams) -> Result<Box<dyn GraphProperty>> + Send + Sync>;

pub struct PropertyRegistry {
    factories: BTreeMap<&'static str, PropertyFactory>,
}

impl Default for PropertyRegistry {
    fn default() -> Self {
        let mut r = Self {
            factories: BTreeMap::new(),
        };
        r.register("largest-component", |p| {
            if !(0.0..=1.0).contains(&p.alpha) {
                return Err(Error::InvalidDomain(format!(
                    "alpha {} outside [0, 1]",
                    p.alpha
                )));
            }
            Ok(Box::new(LargestComponentFraction { alpha: p.alpha }))
        });
        r.register("contains-path", |p| {
            Ok(Box::new(ContainsPath { length: p.length }))
        });
        r.register("cop-pair", |_| Ok(Box::new(CopPairInOneComponent)));
        r
    }
}

impl PropertyRegistry {
    pub fn register<F>(&mut self, name: &'static str, factory: F)
    where
        F: Fn(&PropertyParams) -> Result<Box<dyn GraphProperty>> + Send + Sync + 'static,
    {
        self.factories.insert(name, Box::new(factory));
    }

    pub fn names(&self) -> impl Iterator<Item = &'static str> + '_ {
        self.factories.keys().copied()
    }

    pub fn create(&self, name: &str, params: &PropertyParams) -> Result<Box<dyn GraphProperty>> {
        let factory = self
            .factories
            .get(name)
            .ok_or_else(|| Error::UnknownStrategy {
                kind: "property",
                name: name.to_string(),
                known: self.names().collect::<Vec<_>>().join(", "),
            })?;
        factory(params)
    }
}

/// How often a property holds under models A, B and B' matched to the same
/// expected support size.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TransferReport {
    pub n: usize,
    pub m: u64,
    /// `round(mq)`
    #[serde(rename = "M")]
    pub simple_edges: usize,
    /// `M / N`
    pub p: f64,
    pub property: String,
    /// keyed by model name
    pub frequency: BTreeMap<String, f64>,
    pub trials: u64,
    pub seed: u64,
}

impl TransferReport {
    pub fn max_pairwise_difference(&self) -> f64 {
        let f: Vec<f64> = self.frequency.values().copied().collect();
        f.iter()
            .flat_map(|a| f.iter().map(move |b| (a - b).abs()))
            .fold(0.0, f64::max)
    }
}

/// Frequency of `property` over `trials` draws of `model`. Draw `i` uses a seed
/// derived from `(seed, tag, i)`.
fn frequency(
    model: &dyn crate::bipartite::BipartiteModel,
    property: &dyn GraphProperty,
    n: usize,
    trials: u64,
    seed: u64,
    tag: u64,
) -> f64 {
    let hits: u64 = (0..trials)
        .into_par_iter()
        .map(|i| {
            let mut rng = rng::seeded(rng::derive_seed(seed, &[tag, n as u64, i]));
            let graph = model.sample(n, &mut rng);
            u64::from(property.holds(&graph, &mut rng))
        })
        .sum();
    hits as f64 / trials as f64
}

/// Runs `property` under `A(n, M/N)`, `B(n, M)` and `B'(n, m)` with `M = round(mq)`.
pub fn model_transfer_experiment(
    n: usize,
    m: u64,
    property: &dyn GraphProperty,
    trials: u64,
    seed: u64,
) -> Result<TransferReport> {
    check_trials(trials)?;
    let slots = n * n;
    let law = SupportLaw::new(slots as u64, m)?;
    let simple_edges = (law.mean_f64().round() as usize).min(slots);
    let p = simple_edges as f64 / slots as f64;
    let params = ModelParams {
        n,
        p,
        simple_edges,
        multi_edges: m,
    };
    let registry = ModelRegistry::default();
    let mut freq = BTreeMap::new();
    for (tag, name) in ["A", "B", "B'"].into_iter().enumerate() {
        let model = registry.create(name, &params)?;
        freq.insert(
            name.to_string(),
            frequency(model.as_ref(), property, n, trials, seed, tag as u64),
        );
    }
    Ok(TransferReport {
        n,
        m,
        simple_edges,
        p,
        property: property.name(),
        frequency: freq,
        trials,
        seed,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PoliceReport {
    pub n: usize,
    pub m: u64,
    pub alpha: f64,
    pub trials: u64,
    pub seed: u64,
    /// largest component has at least `alpha * 2n` vertices
    pub freq_large_component: f64,
    /// largest component holds at least two cop edges
    pub freq_police: f64,
    /// mean of `m - Z`
    pub mean_excess: f64,
    /// `m - mq`
    pub expected_excess: f64,
}

/// Samples `B'(n, m)` and looks at the largest support component. `alpha`
/// defaults to `q / 4`.
pub fn police_component_experiment(
    n: usize,
    m: u64,
    alpha: Option<f64>,
    trials: u64,
    seed: u64,
) -> Result<PoliceReport> {
    check_trials(trials)?;
    let law = SupportLaw::new((n * n) as u64, m)?;
    let alpha = alpha.unwrap_or(law.q_f64() / 4.0);
    let model = ModelRegistry::default().create(
        "B'",
        &ModelParams {
            n,
            p: 0.0,
            simple_edges: 0,
            multi_edges: m,
        },
    )?;
    let (large, police, excess) = (0..trials)
        .into_par_iter()
        .map(|i| {
            let mut rng = rng::seeded(rng::derive_seed(seed, &[n as u64, m, i]));
            let graph = model.sample(n, &mut rng);
            let parts = components_of(&graph);
            let (size, cops) = parts
                .largest()
                .map_or((0, 0), |c| (c.size, c.cop_edge_count));
            let large = m > 0 && size as f64 >= alpha * (2 * n) as f64;
            (u64::from(large), u64::from(cops >= 2), graph.excess())
        })
        .reduce(|| (0, 0, 0), |a, b| (a.0 + b.0, a.1 + b.1, a.2 + b.2));
    let t = trials as f64;
    Ok(PoliceReport {
        n,
        m,
        alpha,
        trials,
        seed,
        freq_large_component: large as f64 / t,
        freq_police: police as f64 / t,
        mean_excess: excess as f64 / t,
        expected_excess: m as f64 - law.mean_f64(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PathReport {
    pub n: usize,
    pub beta: f64,
    pub p: f64,
    /// `ceil((1 - ln 16 / beta) 2n)`
    pub bound: usize,
    pub trials: u64,
    pub seed: u64,
    pub fraction: f64,
    pub mean_length: f64,
    pub min_length: usize,
}

/// `ceil((1 - ln 16 / beta) 2n)`; needs `beta > ln 16`.
pub fn path_bound(n: usize, beta: f64) -> Result<usize> {
    let ln16 = 16f64.ln();
    if beta.is_nan() || beta <= ln16 {
        return Err(Error::InvalidDomain(format!(
            "beta must exceed ln 16 = {ln16:.4}, got {beta}"
        )));
    }
    Ok(((1.0 - ln16 / beta) * (2 * n) as f64).ceil() as usize)
}

/// Fraction of `A(n, beta / n)` draws where randomised DFS finds a path of at
/// least [`path_bound`] edges.
pub fn path_experiment(n: usize, beta: f64, trials: u64, seed: u64) -> Result<PathReport> {
    check_trials(trials)?;
    let bound = path_bound(n, beta)?;
    let p = (beta / n as f64).min(1.0);
    let model = ModelRegistry::default().create(
        "A",
        &ModelParams {
            n,
            p,
            simple_edges: 0,
            multi_edges: 0,
        },
    )?;
    let lengths: Vec<usize> = (0..trials)
        .into_par_iter()
        .map(|i| {
            let mut rng = rng::seeded(rng::derive_seed(seed, &[n as u64, beta.to_bits(), i]));
            let graph = model.sample(n, &mut rng).support();
            dfs_long_path(&graph, &mut rng).len().saturating_sub(1)
        })
        .collect();
    let hits = lengths.iter().filter(|&&l| l >= bound).count();
    Ok(PathReport {
        n,
        beta,
        p,
        bound,
        trials,
        seed,
        fraction: hits as f64 / trials as f64,
        mean_length: lengths.iter().sum::<usize>() as f64 / trials as f64,
        min_length: lengths.iter().copied().min().unwrap_or(0),
    })
}

fn check_trials(trials: u64) -> Result<()> {
    if trials == 0 {
        return Err(Error::InvalidDomain("at least one trial is needed".into()));
    }
    Ok(())
}

/// Everything an experiment may read; each experiment ignores what it does not use.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentParams {
    pub n: usize,
    pub m: u64,
    pub trials: u64,
    pub seed: u64,
    pub alpha: Option<f64>,
    pub beta: f64,
    pub property: String,
    pub path_length: usize,
}

impl Default for ExperimentParams {
    fn default() -> Self {
        Self {
            n: 64,
            m: 256,
            trials: 1000,
            seed: 0,
            alpha: None,
            beta: 6.0,
            property: "largest-component".into(),
            path_length: 0,
        }
    }
}

/// An experiment producing a JSON report.
pub trait Experiment: Send + Sync {
    fn name(&self) -> &'static str;
    fn run(&self, params: &ExperimentParams) -> Result<serde_json::Value>;
}

struct Transfer;
struct Police;
struct Path;

impl Experiment for Transfer {
    fn name(&self) -> &'static str {
        "transfer"
    }

    fn run(&self, p: &ExperimentParams) -> Result<serde_json::Value> {
        // default: largest component on at least n of the 2n vertices
        let alpha = p.alpha.unwrap_or(0.5);
        let property = PropertyRegistry::default().create(
            &p.property,
            &PropertyParams {
                alpha,
                length: p.path_length,
            },
        )?;
        Ok(serde_json::to_value(model_transfer_experiment(
            p.n,
            p.m,
            property.as_ref(),
            p.trials,
            p.seed,
        )?)?)
    }
}

impl Experiment for Police {
    fn name(&self) -> &'static str {
        "police"
    }

    fn run(&self, p: &ExperimentParams) -> Result<serde_json::Value> {
        Ok(serde_json::to_value(police_component_experiment(
            p.n, p.m, p.alpha, p.trials, p.seed,
        )?)?)
    }
}

impl Experiment for Path {
    fn name(&self) -> &'static str {
        "path"
    }

    fn run(&self, p: &ExperimentParams) -> Result<serde_json::Value> {
        Ok(serde_json::to_value(path_experiment(
            p.n, p.beta, p.trials, p.seed,
        )?)?)
    }
}

pub struct ExperimentRegistry {
    experiments: BTreeMap<&'static str, Box<dyn Experiment>>,
}

impl Default for ExperimentRegistry {
    fn default() -> Self {
        let mut r = Self {
            experiments: BTreeMap::new(),
        };
        r.register(Box::new(Transfer));
        r.register(Box::new(Police));
        r.register(Box::new(Path));
        r
    }
}

impl ExperimentRegistry {
    pub fn register(&mut self, experiment: Box<dyn Experiment>) {
        self.experiments.insert(experiment.name(), experiment);
    }

    pub fn names(&self) -> impl Iterator<Item = &'static str> + '_ {
        self.experiments.keys().copied()
    }

    pub fn get(&self, name: &str) -> Result<&dyn Experiment> {
        self.experiments
            .get(name)
            .map(|e| e.as_ref())
            .ok_or_else(|| Error::UnknownStrategy {
                kind: "experiment",
                name: name.to_string(),
                known: self.names().collect::<Vec<_>>().join(", "),
            })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bipartite::sample_gnm;
    use crate::lab::stats::isotonic_increasing;

    #[test]
    fn empty_multigraph_has_no_increasing_property() {
        let large = LargestComponentFraction { alpha: 0.25 };
        let r = model_transfer_experiment(8, 0, &large, 50, 1).unwrap();
        assert_eq!(r.simple_edges, 0);
        assert!(r.frequency.values().all(|&f| f == 0.0));
        let police = police_component_experiment(8, 0, None, 50, 1).unwrap();
        assert_eq!(
            (
                police.freq_large_component,
                police.freq_police,
                police.mean_excess
            ),
            (0.0, 0.0, 0.0)
        );
    }

    #[test]
    fn saturated_models_always_have_component_properties() {
        // m huge: M = round(mq) reaches N and p = 1
        let large = LargestComponentFraction { alpha: 1.0 };
        let r = model_transfer_experiment(4, 10_000, &large, 40, 2).unwrap();
        assert_eq!(r.simple_edges, 16);
        assert_eq!(r.p, 1.0);
        assert!(r.frequency.values().all(|&f| f == 1.0), "{r:?}");
    }

    #[test]
    fn mean_excess_matches_the_closed_form() {
        let n = 64;
        let r = police_component_experiment(n, 8 * n as u64, None, 10_000, 3).unwrap();
        assert!(
            (r.mean_excess - r.expected_excess).abs() <= 0.05 * r.expected_excess,
            "{r:?}"
        );
    }

    #[test]
    fn path_bound_arithmetic() {
        assert_eq!(path_bound(256, 6.0).unwrap(), 276);
        assert!(path_bound(256, 16f64.ln()).is_err());
        assert!(path_experiment(10, 2.0, 10, 0).is_err());
    }

    #[test]
    fn gnm_frequency_is_monotone_in_edge_count() {
        let property = LargestComponentFraction { alpha: 0.5 };
        let n = 20;
        let freqs: Vec<f64> = (0..=10)
            .map(|k| {
                let edges = 8 * k;
                let hits = (0..300u64)
                    .filter(|&i| {
                        let g = sample_gnm(n, edges, rng::derive_seed(9, &[i]))
                            .unwrap()
                            .to_multigraph();
                        property.holds(&g, &mut rng::seeded(i))
                    })
                    .count();
                hits as f64 / 300.0
            })
            .collect();
        // the raw curve may jitter; it must stay within sampling noise of its isotonic fit
        let fit = isotonic_increasing(&freqs, &[1.0; 11]);
        assert!(
            freqs.iter().zip(&fit).all(|(a, b)| (a - b).abs() < 0.1),
            "{freqs:?}"
        );
        assert_eq!(freqs[0], 0.0);
        assert!(freqs[10] > 0.95);
    }

    #[test]
    fn registries_resolve_names() {
        let experiments = ExperimentRegistry::default();
        assert_eq!(
            experiments.names().collect::<Vec<_>>(),
            ["path", "police", "transfer"]
        );
        let params = ExperimentParams {
            n: 6,
            m: 20,
            trials: 20,
            property: "cop-pair".into(),
            ..Default::default()
        };
        let report = experiments.get("transfer").unwrap().run(&params).unwrap();
        assert_eq!(report["property"], "cop-pair-in-one-component");
        assert_eq!(report["frequency"]["A"], 0.0);
        assert!(experiments.get("nope").is_err());
        assert!(PropertyRegistry::default()
            .create(
                "nope",
                &PropertyParams {
                    alpha: 0.5,
                    length: 1
                }
            )
            .is_err());
    }
}
