//! Random bipartite graph models.
//!
//! * `A`: each of the `N = n^2` edges independently with probability `p`;
//! * `B`: uniform over edge sets of exactly `M` edges;
//! * `B'`: uniform over multigraphs with total multiplicity `m`.

use std::collections::BTreeMap;

use rand::Rng;

use super::{BipartiteMultigraph, BipartiteSimpleGraph};
use crate::error::{Error, Result};
use crate::rng::{self, LabRng};
use crate::space::sample_counts_into;

/// A random bipartite (multi)graph law.
pub trait BipartiteModel: Send + Sync {
    fn name(&self) -> &'static str;

    /// Simple graphs come back with every multiplicity 1.
    fn sample(&self, n: usize, rng: &mut LabRng) -> BipartiteMultigraph;
}

/// Model A.
#[derive(Debug, Clone, Copy)]
pub struct IndependentEdges {
    pub p: f64,
}

/// Model B.
#[derive(Debug, Clone, Copy)]
pub struct FixedEdgeCount {
    pub edges: usize,
}

/// Model B'.
#[derive(Debug, Clone, Copy)]
pub struct UniformMultigraph {
    pub edges: u64,
}

impl IndependentEdges {
    pub fn new(p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidDomain(format!(
                "edge probability {p} outside [0, 1]"
            )));
        }
        Ok(Self { p })
    }

    fn draw<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> BipartiteSimpleGraph {
        let mut edges = Vec::new();
        for i in 1..=n {
            for j in 1..=n {
                if rng.random_bool(self.p) {
                    edges.push((i, j));
                }
            }
        }
        BipartiteSimpleGraph { n, edges }
    }
}

impl FixedEdgeCount {
    /// Partial Fisher-Yates over the `n^2` edge slots.
    fn draw<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> Result<BipartiteSimpleGraph> {
        let slots = n * n;
        if self.edges > slots {
            return Err(Error::InvalidDomain(format!(
                "{} edges exceed the {slots} available",
                self.edges
            )));
        }
        let mut edges: Vec<(usize, usize)> = rand::seq::index::sample(rng, slots, self.edges)
            .into_iter()
            .map(|s| (s / n + 1, s % n + 1))
            .collect();
        edges.sort_unstable();
        Ok(BipartiteSimpleGraph { n, edges })
    }
}

impl UniformMultigraph {
    /// A uniform configuration of `m` pebbles on the `n^2` grid, read as a multigraph.
    fn draw<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> BipartiteMultigraph {
        let mut counts = Vec::new();
        sample_counts_into(rng, n * n, self.edges, &mut counts);
        let multiplicity: BTreeMap<(usize, usize), u32> = counts
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(|(s, &c)| ((s / n + 1, s % n + 1), c))
            .collect();
        BipartiteMultigraph {
            n,
            multiplicity,
            total: self.edges,
        }
    }
}

impl BipartiteModel for IndependentEdges {
    fn name(&self) -> &'static str {
        "A"
    }

    fn sample(&self, n: usize, rng: &mut LabRng) -> BipartiteMultigraph {
        self.draw(n, rng).to_multigraph()
    }
}

impl BipartiteModel for FixedEdgeCount {
    fn name(&self) -> &'static str {
        "B"
    }

    fn sample(&self, n: usize, rng: &mut LabRng) -> BipartiteMultigraph {
        // clamp: the registry validates against n before sampling
        let clamped = FixedEdgeCount {
            edges: self.edges.min(n * n),
        };
        clamped
            .draw(n, rng)
            .expect("edge count clamped to slots")
            .to_multigraph()
    }
}

impl BipartiteModel for UniformMultigraph {
    fn name(&self) -> &'static str {
        "B'"
    }

    fn sample(&self, n: usize, rng: &mut LabRng) -> BipartiteMultigraph {
        self.draw(n, rng)
    }
}

/// Model A sample.
pub fn sample_gnp(n: usize, p: f64, seed: u64) -> Result<BipartiteSimpleGraph> {
    super::check_part_size(n)?;
    Ok(IndependentEdges::new(p)?.draw(n, &mut rng::seeded(seed)))
}

/// Model B sample.
pub fn sample_gnm(n: usize, edges: usize, seed: u64) -> Result<BipartiteSimpleGraph> {
    super::check_part_size(n)?;
    FixedEdgeCount { edges }.draw(n, &mut rng::seeded(seed))
}

/// Model B' sample.
pub fn sample_multigraph(n: usize, edges: u64, seed: u64) -> Result<BipartiteMultigraph> {
    super::check_part_size(n)?;
    Ok(UniformMultigraph { edges }.draw(n, &mut rng::seeded(seed)))
}

/// Parameters a model factory may read.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    pub n: usize,
    /// model A edge probability
    pub p: f64,
    /// model B edge count
    pub simple_edges: usize,
    /// model B' total multiplicity
    pub multi_edges: u64,
}

type ModelFactory = Box<dyn Fn(&ModelParams) -> Result<Box<dyn BipartiteModel>> + Send + Sync>;

/// Name-keyed model factories. Each model answers to a short and a long name.
pub struct ModelRegistry {
    factories: BTreeMap<&'static str, ModelFactory>,
}

impl Default for ModelRegistry {
    fn default() -> Self {
        let mut r = Self {
            factories: BTreeMap::new(),
        };
        for name in ["A", "gnp"] {
            r.register(name, |p| Ok(Box::new(IndependentEdges::new(p.p)?)));
        }
        for name in ["B", "gnm"] {
            r.register(name, |p| {
                if p.simple_edges > p.n * p.n {
                    return Err(Error::InvalidDomain(format!(
                        "M = {} exceeds n^2 = {}",
                        p.simple_edges,
                        p.n * p.n
                    )));
                }
                Ok(Box::new(FixedEdgeCount {
                    edges: p.simple_edges,
                }))
            });
        }
        for name in ["B'", "multigraph"] {
            r.register(name, |p| {
                Ok(Box::new(UniformMultigraph {
                    edges: p.multi_edges,
                }))
            });
        }
        r
    }
}

impl ModelRegistry {
    pub fn register<F>(&mut self, name: &'static str, factory: F)
    where
        F: Fn(&ModelParams) -> Result<Box<dyn BipartiteModel>> + Send + Sync + 'static,
    {
        self.factories.insert(name, Box::new(factory));
    }

    pub fn names(&self) -> impl Iterator<Item = &'static str> + '_ {
        self.factories.keys().copied()
    }

    pub fn create(&self, name: &str, params: &ModelParams) -> Result<Box<dyn BipartiteModel>> {
        let factory = self
            .factories
            .get(name)
            .ok_or_else(|| Error::UnknownStrategy {
                kind: "graph model",
                name: name.to_string(),
                known: self.names().collect::<Vec<_>>().join(", "),
            })?;
        factory(params)
    }
}
