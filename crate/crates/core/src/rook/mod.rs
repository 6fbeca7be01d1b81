//! The rook's graph `K_n □ K_n`: an `n × n` grid in which every row and every
//! column is a clique.
//!
//! A vertex holding two or more pebbles is a *cop*, one pebble a *citizen*, none a
//! *robber*. Two vertices *see* each other when they share a row or a column.
//! The *citizen subgraph* is the "sees" graph induced on occupied vertices; a
//! component of it with at least two cops is a *police component*, and any
//! configuration with one is solvable.

mod census;
mod plan;
mod tiers;

use serde::{Deserialize, Serialize};

use crate::config::PebbleConfiguration;
use crate::error::{Error, Result};
use crate::graph::SimpleGraph;

pub use census::{Census, CitizenPartition, ComponentSummary};
pub use plan::{catch_plan, CatchPlan, Move};
pub use tiers::{
    solvable_tiered, Decision, SolverTier, TierOptions, TierRegistry, TieredSolver, Verdict,
    VerdictJson, DEFAULT_TIER_ORDER,
};

/// A grid vertex, 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GridVertex {
    pub row: usize,
    pub col: usize,
}

impl GridVertex {
    pub const fn new(row: usize, col: usize) -> Self {
        Self { row, col }
    }

    /// True when the two vertices share a row or a column. Equal vertices are rejected.
    pub fn sees(self, other: GridVertex) -> Result<bool> {
        if self == other {
            return Err(Error::InvalidDomain(format!("{self} cannot see itself")));
        }
        Ok(self.shares_line(other))
    }

    pub(crate) fn shares_line(self, other: GridVertex) -> bool {
        self.row == other.row || self.col == other.col
    }
}

impl std::fmt::Display for GridVertex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({},{})", self.row, self.col)
    }
}

impl std::str::FromStr for GridVertex {
    type Err = Error;

    /// Parses `"row,col"`.
    fn from_str(s: &str) -> Result<Self> {
        let (r, c) = s
            .split_once(',')
            .ok_or_else(|| Error::Parse(format!("expected row,col but got '{s}'")))?;
        let parse = |x: &str| {
            x.trim()
                .parse::<usize>()
                .map_err(|e| Error::Parse(format!("'{x}': {e}")))
        };
        Ok(Self::new(parse(r)?, parse(c)?))
    }
}

/// `sees` as a free function.
pub fn sees(u: GridVertex, v: GridVertex) -> Result<bool> {
    u.sees(v)
}

/// `K_n □ K_n` with vertices indexed row-major: `(row, col) -> (row-1)*n + (col-1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RookGraph {
    n: usize,
}

impl RookGraph {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidDomain("rook graph needs n >= 1".into()));
        }
        Ok(Self { n })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn vertex_count(&self) -> usize {
        self.n * self.n
    }

    pub fn edge_count(&self) -> usize {
        self.n * self.n * (self.n - 1)
    }

    pub fn contains(&self, v: GridVertex) -> bool {
        (1..=self.n).contains(&v.row) && (1..=self.n).contains(&v.col)
    }

    pub fn index(&self, v: GridVertex) -> usize {
        debug_assert!(self.contains(v));
        (v.row - 1) * self.n + (v.col - 1)
    }

    pub fn vertex(&self, index: usize) -> GridVertex {
        GridVertex::new(index / self.n + 1, index % self.n + 1)
    }

    pub fn vertices(&self) -> impl Iterator<Item = GridVertex> + '_ {
        (0..self.vertex_count()).map(|i| self.vertex(i))
    }

    pub fn is_adjacent(&self, u: GridVertex, v: GridVertex) -> bool {
        u != v && u.shares_line(v)
    }

    /// Explicit adjacency-list form, for the generic exact solver.
    pub fn to_simple_graph(&self) -> SimpleGraph {
        let n = self.n;
        let mut edges = Vec::with_capacity(self.edge_count());
        for r in 1..=n {
            for c in 1..=n {
                let u = self.index(GridVertex::new(r, c));
                for c2 in c + 1..=n {
                    edges.push((u, self.index(GridVertex::new(r, c2))));
                }
                for r2 in r + 1..=n {
                    edges.push((u, self.index(GridVertex::new(r2, c))));
                }
            }
        }
        SimpleGraph::from_edges(self.vertex_count(), &edges).expect("grid edges are valid")
    }
}

/// `rook_graph(n)`.
pub fn rook_graph(n: usize) -> Result<RookGraph> {
    RookGraph::new(n)
}

/// A pebble configuration on a rook's graph.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RookConfig {
    graph: RookGraph,
    config: PebbleConfiguration,
}

impl RookConfig {
    pub fn new(graph: RookGraph, config: PebbleConfiguration) -> Result<Self> {
        if config.vertex_count() != graph.vertex_count() {
            return Err(Error::InvalidDomain(format!(
                "configuration on {} vertices does not fit K_{}^2",
                config.vertex_count(),
                graph.n()
            )));
        }
        Ok(Self { graph, config })
    }

    pub fn empty(n: usize) -> Result<Self> {
        let graph = RookGraph::new(n)?;
        Ok(Self {
            graph,
            config: PebbleConfiguration::empty(graph.vertex_count()),
        })
    }

    /// Builds from `(vertex, count)` triples; repeated vertices add up.
    pub fn from_pebbles(n: usize, pebbles: &[(GridVertex, u32)]) -> Result<Self> {
        let graph = RookGraph::new(n)?;
        let mut entries = Vec::with_capacity(pebbles.len());
        for &(v, c) in pebbles {
            if !graph.contains(v) {
                return Err(Error::InvalidDomain(format!(
                    "{v} lies outside the {n}x{n} grid"
                )));
            }
            entries.push((graph.index(v), c));
        }
        let config = PebbleConfiguration::from_sparse(graph.vertex_count(), &entries)?;
        Ok(Self { graph, config })
    }

    pub fn graph(&self) -> RookGraph {
        self.graph
    }

    pub fn n(&self) -> usize {
        self.graph.n
    }

    pub fn config(&self) -> &PebbleConfiguration {
        &self.config
    }

    pub fn into_config(self) -> PebbleConfiguration {
        self.config
    }

    pub fn total(&self) -> u64 {
        self.config.total()
    }

    pub fn count(&self, v: GridVertex) -> u32 {
        self.config.count(self.graph.index(v))
    }

    /// Occupied vertices with their counts, row-major.
    pub fn pebbles(&self) -> impl Iterator<Item = (GridVertex, u32)> + '_ {
        self.config
            .occupied()
            .map(|(i, c)| (self.graph.vertex(i), c))
    }

    /// Applies one pebbling move, checking legality on the grid.
    pub fn apply_move(&self, mv: Move) -> Result<Self> {
        let g = self.graph;
        for v in [mv.from, mv.to] {
            if !g.contains(v) {
                return Err(Error::InvalidDomain(format!("{v} lies outside the grid")));
            }
        }
        let (from, to) = (g.index(mv.from), g.index(mv.to));
        if !g.is_adjacent(mv.from, mv.to) {
            return Err(Error::NotAnEdge(from, to));
        }
        let held = self.config.count(from);
        if held < 2 {
            return Err(Error::IllegalMove { vertex: from, held });
        }
        let mut counts = self.config.counts().to_vec();
        counts[from] -= 2;
        counts[to] += 1;
        Ok(Self {
            graph: g,
            config: PebbleConfiguration::new(counts),
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&RookConfigJson::from(self)).expect("plain struct serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let wire: RookConfigJson = serde_json::from_str(text)?;
        wire.try_into()
    }
}

/// Wire form: `{"n": n, "pebbles": [[row, col, count], ...]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RookConfigJson {
    pub n: usize,
    #[serde(default)]
    pub pebbles: Vec<(usize, usize, u32)>,
}

impl From<&RookConfig> for RookConfigJson {
    fn from(c: &RookConfig) -> Self {
        Self {
            n: c.n(),
            pebbles: c.pebbles().map(|(v, k)| (v.row, v.col, k)).collect(),
        }
    }
}

impl TryFrom<RookConfigJson> for RookConfig {
    type Error = Error;

    fn try_from(wire: RookConfigJson) -> Result<Self> {
        let pebbles: Vec<_> = wire
            .pebbles
            .iter()
            .map(|&(r, c, k)| (GridVertex::new(r, c), k))
            .collect();
        RookConfig::from_pebbles(wire.n, &pebbles)
    }
}

/// P/T/R classification of a configuration.
pub fn classify(config: &RookConfig) -> CitizenPartition {
    Census::new(config).partition()
}

/// Some vertex holds four or more pebbles.
pub fn has_robocop(config: &RookConfig) -> bool {
    config.config().max_count() >= 4
}

/// The root is occupied, or a cop shares its row or column.
pub fn direct_catch(config: &RookConfig, root: GridVertex) -> bool {
    Census::new(config).direct_catch(root)
}

/// Components of the citizen subgraph, ordered by their smallest member.
pub fn citizen_components(config: &RookConfig) -> Vec<ComponentSummary> {
    Census::new(config).components().to_vec()
}

pub fn has_police_component(config: &RookConfig) -> bool {
    Census::new(config).has_police_component()
}

/// Checks that `{left i, right j} -> (i, j)` maps the edges of `K_{n,n}` onto
/// the vertices of `K_n □ K_n` bijectively, with two edges sharing an endpoint
/// exactly when their images are adjacent.
pub fn verify_line_graph_iso(n: usize) -> Result<bool> {
    let rook = RookGraph::new(n)?;
    let grid = rook.to_simple_graph();
    // edges of K_{n,n}: left i in 0..n, right j in 0..n
    let edges: Vec<(usize, usize)> = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).collect();
    let image: Vec<usize> = edges
        .iter()
        .map(|&(i, j)| rook.index(GridVertex::new(i + 1, j + 1)))
        .collect();

    let mut hit = vec![false; rook.vertex_count()];
    for &v in &image {
        if std::mem::replace(&mut hit[v], true) {
            return Ok(false);
        }
    }
    if hit.iter().any(|h| !h) {
        return Ok(false);
    }
    for (a, &(i1, j1)) in edges.iter().enumerate() {
        for (b, &(i2, j2)) in edges.iter().enumerate().skip(a + 1) {
            let share_endpoint = i1 == i2 || j1 == j2;
            if share_endpoint != grid.is_adjacent(image[a], image[b]) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(r: usize, c: usize) -> GridVertex {
        GridVertex::new(r, c)
    }

    #[test]
    fn grid_shapes() {
        let g2 = rook_graph(2).unwrap().to_simple_graph();
        assert_eq!(g2.vertex_count(), 4);
        assert!((0..4).all(|u| g2.degree(u) == 2));
        let g3 = rook_graph(3).unwrap().to_simple_graph();
        assert_eq!(g3.vertex_count(), 9);
        assert!((0..9).all(|u| g3.degree(u) == 4));
        // n^2 (n - 1) = 18; counted independently from the edge list
        assert_eq!(g3.edge_count(), 18);
        for n in 1..7 {
            let r = rook_graph(n).unwrap();
            let g = r.to_simple_graph();
            assert_eq!(g.edge_count(), r.edge_count());
            for u in 0..g.vertex_count() {
                assert!(!g.is_adjacent(u, u));
                assert_eq!(g.degree(u), 2 * (n - 1));
                for &w in g.neighbors(u) {
                    assert!(g.is_adjacent(w, u));
                }
            }
        }
        assert!(rook_graph(0).is_err());
    }

    #[test]
    fn sees_examples() {
        assert!(sees(v(1, 2), v(1, 5)).unwrap());
        assert!(sees(v(2, 3), v(5, 3)).unwrap());
        assert!(!sees(v(1, 2), v(3, 4)).unwrap());
        assert!(sees(v(1, 1), v(1, 1)).is_err());
    }

    #[test]
    fn classify_examples() {
        let c = RookConfig::from_pebbles(3, &[(v(1, 1), 2), (v(1, 2), 1)]).unwrap();
        let p = classify(&c);
        assert_eq!(p.cops, vec![v(1, 1)]);
        assert_eq!(p.citizens, vec![v(1, 2)]);
        assert_eq!(p.robbers.len(), 7);

        let empty = RookConfig::empty(4).unwrap();
        let p = classify(&empty);
        assert!(p.cops.is_empty() && p.citizens.is_empty());
        assert_eq!(p.robbers.len(), 16);
    }

    #[test]
    fn robocop_examples() {
        assert!(has_robocop(
            &RookConfig::from_pebbles(3, &[(v(2, 2), 4)]).unwrap()
        ));
        assert!(!has_robocop(
            &RookConfig::from_pebbles(3, &[(v(2, 2), 3), (v(1, 1), 3)]).unwrap()
        ));
        assert!(!has_robocop(&RookConfig::empty(3).unwrap()));
    }

    #[test]
    fn direct_catch_examples() {
        let on_root = RookConfig::from_pebbles(3, &[(v(2, 2), 1)]).unwrap();
        assert!(direct_catch(&on_root, v(2, 2)));
        let cop_in_row = RookConfig::from_pebbles(3, &[(v(2, 3), 2)]).unwrap();
        assert!(direct_catch(&cop_in_row, v(2, 1)));
        let citizen_only = RookConfig::from_pebbles(3, &[(v(2, 3), 1)]).unwrap();
        assert!(!direct_catch(&citizen_only, v(2, 1)));
    }

    #[test]
    fn component_examples() {
        let chain =
            RookConfig::from_pebbles(3, &[(v(1, 1), 2), (v(1, 2), 1), (v(3, 2), 2)]).unwrap();
        let comps = citizen_components(&chain);
        assert_eq!(comps.len(), 1);
        assert_eq!(comps[0].size, 3);
        assert_eq!(comps[0].cop_count, 2);
        assert!(has_police_component(&chain));

        let apart = RookConfig::from_pebbles(2, &[(v(1, 1), 2), (v(2, 2), 2)]).unwrap();
        let comps = citizen_components(&apart);
        assert_eq!(comps.len(), 2);
        assert!(comps.iter().all(|c| c.cop_count == 1));
        assert!(!has_police_component(&apart));

        assert!(citizen_components(&RookConfig::empty(3).unwrap()).is_empty());
        assert!(!has_police_component(
            &RookConfig::from_pebbles(3, &[(v(1, 1), 3)]).unwrap()
        ));
    }

    #[test]
    fn line_graph_isomorphism() {
        for n in 1..=8 {
            assert!(verify_line_graph_iso(n).unwrap(), "n = {n}");
        }
    }

    #[test]
    fn json_round_trip() {
        let text = r#"{"n": 3, "pebbles": [[1, 1, 2], [1, 2, 1], [3, 2, 2]]}"#;
        let c = RookConfig::from_json(text).unwrap();
        assert_eq!(c.total(), 5);
        assert_eq!(c.count(v(3, 2)), 2);
        assert_eq!(RookConfig::from_json(&c.to_json()).unwrap(), c);
        assert!(RookConfig::from_json(r#"{"n": 2, "pebbles": [[3, 1, 1]]}"#).is_err());
        assert!(RookConfig::from_json(r#"{"n": 2, "pebbles": [[0, 1, 1]]}"#).is_err());
    }

    #[test]
    fn vertex_parsing() {
        assert_eq!("2,3".parse::<GridVertex>().unwrap(), v(2, 3));
        assert_eq!(" 4 , 1 ".parse::<GridVertex>().unwrap(), v(4, 1));
        assert!("23".parse::<GridVertex>().is_err());
    }
}
