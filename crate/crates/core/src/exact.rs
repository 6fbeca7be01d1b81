//! Exhaustive solvability oracle for small graphs.
//!
//! A configuration is `r`-solvable when some sequence of pebbling moves puts a
//! pebble on `r`. Every move removes one pebble from play, so the reachable
//! configurations form a DAG and a depth-first search with a memo of failed
//! states terminates. Two pruning rules keep it small:
//!
//! * a state pointwise at least a known-solvable state is solvable;
//! * a state whose distance weight `sum c(v) 2^-d(v,r)` is below one is not,
//!   because no move increases that weight.

use std::collections::HashSet;

use crate::config::PebbleConfiguration;
use crate::error::{Error, Result};
use crate::graph::SimpleGraph;
use crate::space::{enumerate_configurations, DEFAULT_ENUMERATION_CAP};

/// Default number of expanded states allowed per root query.
pub const DEFAULT_STATE_BUDGET: usize = 1_000_000;

const SOLVED_MEMO_CAP: usize = 4096;

/// `true` proves `config` cannot reach `root`; `false` proves nothing.
pub fn weight_certificate_unsolvable(
    graph: &SimpleGraph,
    config: &PebbleConfiguration,
    root: usize,
) -> bool {
    let dist = graph.distances_from(root);
    let weights = DistanceWeights::new(&dist);
    !weights.reaches_one(config.counts())
}

/// `root`-solvability by exhaustive search within [`DEFAULT_STATE_BUDGET`].
pub fn is_root_solvable_exact(
    graph: &SimpleGraph,
    config: &PebbleConfiguration,
    root: usize,
) -> Result<bool> {
    ExactSolver::new(graph)?.root_solvable(config, root)
}

/// Solvability for every root within [`DEFAULT_STATE_BUDGET`] per root.
pub fn is_solvable_exact(graph: &SimpleGraph, config: &PebbleConfiguration) -> Result<bool> {
    ExactSolver::new(graph)?.solvable(config)
}

/// Least `t` such that every configuration of `t` pebbles is solvable.
pub fn pebbling_number(graph: &SimpleGraph) -> Result<u64> {
    ExactSolver::new(graph)?.pebbling_number(DEFAULT_ENUMERATION_CAP)
}

/// Exact-search configuration: the graph and a per-query state budget.
#[derive(Debug, Clone)]
pub struct ExactSolver<'g> {
    graph: &'g SimpleGraph,
    budget: usize,
}

impl<'g> ExactSolver<'g> {
    pub fn new(graph: &'g SimpleGraph) -> Result<Self> {
        if !graph.is_connected() {
            return Err(Error::InvalidDomain(
                "exact solver needs a connected graph".into(),
            ));
        }
        Ok(Self {
            graph,
            budget: DEFAULT_STATE_BUDGET,
        })
    }

    pub fn with_budget(mut self, budget: usize) -> Self {
        self.budget = budget;
        self
    }

    pub fn graph(&self) -> &'g SimpleGraph {
        self.graph
    }

    pub fn root_solvable(&self, config: &PebbleConfiguration, root: usize) -> Result<bool> {
        self.session().root_solvable(config, root)
    }

    pub fn solvable(&self, config: &PebbleConfiguration) -> Result<bool> {
        self.session().solvable(config)
    }

    /// A session keeps per-root memo tables alive across queries.
    pub fn session(&self) -> SolveSession<'g> {
        SolveSession {
            graph: self.graph,
            budget: self.budget,
            roots: Vec::new(),
        }
    }

    /// Scans `t = 1, 2, ...`; the answer is the first `t` at which every
    /// configuration is solvable, so an unsolvable one with `t - 1` pebbles has
    /// been exhibited (or `t - 1 = 0`).
    pub fn pebbling_number(&self, cap: u64) -> Result<u64> {
        let mut session = self.session();
        let n = self.graph.vertex_count();
        let mut t = 1u64;
        loop {
            let mut all = true;
            for config in enumerate_configurations(n, t, cap)? {
                if !session.solvable(&config)? {
                    all = false;
                    break;
                }
            }
            if all {
                return Ok(t);
            }
            t += 1;
        }
    }
}

/// Mutable search state shared by a sequence of queries on one graph.
#[derive(Debug)]
pub struct SolveSession<'g> {
    graph: &'g SimpleGraph,
    budget: usize,
    roots: Vec<Option<RootSearch>>,
}

impl SolveSession<'_> {
    pub fn root_solvable(&mut self, config: &PebbleConfiguration, root: usize) -> Result<bool> {
        let graph = self.graph;
        graph.check_vertex(root)?;
        if config.vertex_count() != graph.vertex_count() {
            return Err(Error::InvalidDomain(
                "configuration and graph sizes differ".into(),
            ));
        }
        if config.count(root) > 0 {
            return Ok(true);
        }
        if self.roots.len() < graph.vertex_count() {
            self.roots.resize_with(graph.vertex_count(), || None);
        }
        let search = self.roots[root].get_or_insert_with(|| RootSearch::new(graph, root));
        search.expanded = 0;
        let mut counts = config.counts().to_vec();
        search.search(graph, &mut counts, self.budget)
    }

    pub fn solvable(&mut self, config: &PebbleConfiguration) -> Result<bool> {
        for root in 0..self.graph.vertex_count() {
            if !self.root_solvable(config, root)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// `2^(D - d(v))` per vertex, compared against `2^D`, where `D` is the root's
/// eccentricity. Integer arithmetic while it fits, floats beyond.
#[derive(Debug, Clone)]
struct DistanceWeights {
    scaled: Vec<u128>,
    unit: u128,
    float: Option<Vec<f64>>,
}

impl DistanceWeights {
    fn new(dist: &[Option<u32>]) -> Self {
        let ecc = dist.iter().flatten().copied().max().unwrap_or(0);
        if ecc <= 64 {
            let scaled = dist
                .iter()
                .map(|d| d.map_or(0, |d| 1u128 << (ecc - d)))
                .collect();
            Self {
                scaled,
                unit: 1u128 << ecc,
                float: None,
            }
        } else {
            let float = dist
                .iter()
                .map(|d| d.map_or(0.0, |d| 0.5f64.powi(d as i32)))
                .collect();
            Self {
                scaled: Vec::new(),
                unit: 0,
                float: Some(float),
            }
        }
    }

    fn reaches_one(&self, counts: &[u32]) -> bool {
        match &self.float {
            None => {
                let mut acc = 0u128;
                for (&c, &w) in counts.iter().zip(&self.scaled) {
                    acc += u128::from(c) * w;
                    if acc >= self.unit {
                        return true;
                    }
                }
                false
            }
            Some(w) => {
                counts
                    .iter()
                    .zip(w)
                    .map(|(&c, &w)| f64::from(c) * w)
                    .sum::<f64>()
                    >= 1.0
            }
        }
    }
}

#[derive(Debug)]
struct RootSearch {
    root: usize,
    weights: DistanceWeights,
    /// neighbours of each vertex, nearest to the root first
    toward_root: Vec<Vec<usize>>,
    failed: HashSet<Vec<u32>>,
    solved: Vec<Vec<u32>>,
    expanded: usize,
}

impl RootSearch {
    fn new(graph: &SimpleGraph, root: usize) -> Self {
        let dist = graph.distances_from(root);
        let toward_root = (0..graph.vertex_count())
            .map(|u| {
                let mut nbrs = graph.neighbors(u).to_vec();
                nbrs.sort_by_key(|&v| (dist[v], v));
                nbrs
            })
            .collect();
        Self {
            root,
            weights: DistanceWeights::new(&dist),
            toward_root,
            failed: HashSet::new(),
            solved: Vec::new(),
            expanded: 0,
        }
    }

    fn search(
        &mut self,
        graph: &SimpleGraph,
        counts: &mut Vec<u32>,
        budget: usize,
    ) -> Result<bool> {
        if counts[self.root] > 0 {
            return Ok(true);
        }
        if !self.weights.reaches_one(counts) {
            return Ok(false);
        }
        if self.failed.contains(counts.as_slice()) {
            return Ok(false);
        }
        if self
            .solved
            .iter()
            .any(|s| s.iter().zip(counts.iter()).all(|(a, b)| b >= a))
        {
            return Ok(true);
        }
        self.expanded += 1;
        if self.expanded > budget {
            return Err(Error::BudgetExhausted(budget));
        }
        for u in 0..graph.vertex_count() {
            if counts[u] < 2 {
                continue;
            }
            for i in 0..self.toward_root[u].len() {
                let v = self.toward_root[u][i];
                counts[u] -= 2;
                counts[v] += 1;
                let found = self.search(graph, counts, budget);
                counts[u] += 2;
                counts[v] -= 1;
                if found? {
                    if self.solved.len() < SOLVED_MEMO_CAP {
                        self.solved.push(counts.clone());
                    }
                    return Ok(true);
                }
            }
        }
        self.failed.insert(counts.clone());
        Ok(false)
    }
}

#[cfg(test)]
mod tests {
    use proptest::prelude::*;
    use rand::Rng;

    use super::*;
    use crate::rng;
    use crate::space::sample_configuration;

    fn k2() -> SimpleGraph {
        SimpleGraph::complete(2).unwrap()
    }

    /// Independent oracle: plain recursion over every move sequence, no memo or pruning.
    fn brute_root_solvable(graph: &SimpleGraph, counts: &[u32], root: usize) -> bool {
        if counts[root] > 0 {
            return true;
        }
        for u in 0..counts.len() {
            if counts[u] >= 2 {
                for &v in graph.neighbors(u) {
                    let mut next = counts.to_vec();
                    next[u] -= 2;
                    next[v] += 1;
                    if brute_root_solvable(graph, &next, root) {
                        return true;
                    }
                }
            }
        }
        false
    }

    #[test]
    fn k2_examples() {
        let g = k2();
        assert!(is_root_solvable_exact(&g, &PebbleConfiguration::new(vec![2, 0]), 1).unwrap());
        assert!(!is_root_solvable_exact(&g, &PebbleConfiguration::new(vec![1, 0]), 1).unwrap());
        assert!(is_solvable_exact(&g, &PebbleConfiguration::new(vec![1, 1])).unwrap());
        assert!(!is_solvable_exact(&g, &PebbleConfiguration::new(vec![1, 0])).unwrap());
    }

    #[test]
    fn path_far_end() {
        let p3 = SimpleGraph::path(3).unwrap();
        for (counts, expect) in [(vec![3, 0, 0], false), (vec![4, 0, 0], true)] {
            assert_eq!(brute_root_solvable(&p3, &counts, 2), expect);
            assert_eq!(
                is_root_solvable_exact(&p3, &PebbleConfiguration::new(counts), 2).unwrap(),
                expect
            );
        }
    }

    #[test]
    fn four_cycle_with_two_opposite_cops() {
        // K2 x K2 as the 4-cycle (1,1)-(1,2)-(2,2)-(2,1): index = 2*(row-1) + (col-1)
        let c4 = SimpleGraph::from_edges(4, &[(0, 1), (0, 2), (1, 3), (2, 3)]).unwrap();
        let config = PebbleConfiguration::new(vec![2, 0, 0, 2]);
        for root in 0..4 {
            assert!(brute_root_solvable(&c4, config.counts(), root));
        }
        assert!(is_solvable_exact(&c4, &config).unwrap());
    }

    #[test]
    fn pebbling_numbers_of_tiny_graphs() {
        assert_eq!(
            pebbling_number(&SimpleGraph::complete(1).unwrap()).unwrap(),
            1
        );
        assert_eq!(
            pebbling_number(&SimpleGraph::complete(3).unwrap()).unwrap(),
            3
        );
        assert_eq!(pebbling_number(&SimpleGraph::path(3).unwrap()).unwrap(), 4);
        assert_eq!(pebbling_number(&SimpleGraph::path(4).unwrap()).unwrap(), 8);
        assert_eq!(
            pebbling_number(&SimpleGraph::complete(5).unwrap()).unwrap(),
            5
        );
    }

    #[test]
    fn budget_exhaustion_is_not_false() {
        let p5 = SimpleGraph::path(5).unwrap();
        let config = PebbleConfiguration::new(vec![16, 0, 0, 0, 0]);
        let solver = ExactSolver::new(&p5).unwrap().with_budget(3);
        assert_eq!(
            solver.root_solvable(&config, 4),
            Err(Error::BudgetExhausted(3))
        );
        assert!(ExactSolver::new(&p5)
            .unwrap()
            .root_solvable(&config, 4)
            .unwrap());
    }

    #[test]
    fn rejects_disconnected_graphs() {
        assert!(ExactSolver::new(&SimpleGraph::edgeless(2).unwrap()).is_err());
    }

    #[test]
    fn weight_certificate_examples() {
        let g = k2();
        assert!(weight_certificate_unsolvable(
            &g,
            &PebbleConfiguration::new(vec![1, 0]),
            1
        ));
        assert!(!weight_certificate_unsolvable(
            &g,
            &PebbleConfiguration::new(vec![2, 0]),
            1
        ));
    }

    fn random_connected_graph(rng: &mut impl Rng, n: usize) -> SimpleGraph {
        // random spanning tree plus random extra edges
        let mut edges = Vec::new();
        for v in 1..n {
            edges.push((rng.random_range(0..v), v));
        }
        for u in 0..n {
            for v in u + 1..n {
                if rng.random_bool(0.25) {
                    edges.push((u, v));
                }
            }
        }
        SimpleGraph::from_edges(n, &edges).unwrap()
    }

    #[test]
    fn weight_certificate_never_contradicts_exact_solver() {
        let mut rng = rng::seeded(11);
        for i in 0..10_000u64 {
            let n = rng.random_range(1..=6);
            let graph = random_connected_graph(&mut rng, n);
            let t = rng.random_range(0..=9);
            let config = sample_configuration(n, t, i).unwrap();
            let root = rng.random_range(0..n);
            if weight_certificate_unsolvable(&graph, &config, root) {
                assert!(!is_root_solvable_exact(&graph, &config, root).unwrap());
            }
        }
    }

    #[test]
    fn exact_matches_brute_force() {
        let mut rng = rng::seeded(5);
        for i in 0..1500u64 {
            let n = rng.random_range(2..=5);
            let graph = random_connected_graph(&mut rng, n);
            let config = sample_configuration(n, rng.random_range(0..=7), i).unwrap();
            let root = rng.random_range(0..n);
            assert_eq!(
                is_root_solvable_exact(&graph, &config, root).unwrap(),
                brute_root_solvable(&graph, config.counts(), root),
                "{config:?} root {root}"
            );
        }
    }

    proptest! {
        #[test]
        fn adding_pebbles_preserves_solvability(
            seed in any::<u64>(),
            t in 0u64..8,
            extra in proptest::collection::vec(0u32..3, 5),
        ) {
            let mut rng = rng::seeded(seed);
            let graph = random_connected_graph(&mut rng, 5);
            let config = sample_configuration(5, t, seed).unwrap();
            if is_solvable_exact(&graph, &config).unwrap() {
                let bigger: Vec<u32> = config.counts().iter().zip(&extra).map(|(a, b)| a + b).collect();
                prop_assert!(is_solvable_exact(&graph, &PebbleConfiguration::new(bigger)).unwrap());
            }
        }
    }
}
