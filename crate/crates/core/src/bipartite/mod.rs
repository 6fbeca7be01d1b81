//! Bipartite graphs and multigraphs on `n` left and `n` right vertices.
//!
//! Left vertex `i` and right vertex `j` are 1-based, mirroring the grid: the edge
//! `{L_i, R_j}` corresponds to the rook's-graph vertex `(i, j)`, and a pebble
//! configuration is the same thing as a multigraph whose edge multiplicities
//! are the pebble counts.

mod dfs;
mod models;

use std::collections::BTreeMap;

use petgraph::unionfind::UnionFind;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rook::{GridVertex, RookConfig};

pub use dfs::{dfs_long_path, longest_path_dfs, BipartiteVertex};
pub use models::{
    sample_gnm, sample_gnp, sample_multigraph, BipartiteModel, FixedEdgeCount, IndependentEdges,
    ModelParams, ModelRegistry, UniformMultigraph,
};

/// A simple bipartite graph: a set of `(left, right)` pairs.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BipartiteSimpleGraph {
    n: usize,
    /// sorted, no duplicates
    edges: Vec<(usize, usize)>,
}

impl BipartiteSimpleGraph {
    pub fn new(n: usize, mut edges: Vec<(usize, usize)>) -> Result<Self> {
        check_part_size(n)?;
        for &(i, j) in &edges {
            check_endpoints(n, i, j)?;
        }
        edges.sort_unstable();
        edges.dedup();
        Ok(Self { n, edges })
    }

    pub fn complete(n: usize) -> Result<Self> {
        Self::new(
            n,
            (1..=n).flat_map(|i| (1..=n).map(move |j| (i, j))).collect(),
        )
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.edges.binary_search(&(i, j)).is_ok()
    }

    /// The same graph as a multigraph with every multiplicity 1.
    pub fn to_multigraph(&self) -> BipartiteMultigraph {
        BipartiteMultigraph {
            n: self.n,
            multiplicity: self.edges.iter().map(|&e| (e, 1)).collect(),
            total: self.edges.len() as u64,
        }
    }
}

/// A bipartite multigraph, stored sparsely: only edges with multiplicity at least one.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BipartiteMultigraph {
    n: usize,
    multiplicity: BTreeMap<(usize, usize), u32>,
    total: u64,
}

impl BipartiteMultigraph {
    /// Builds from `(left, right, multiplicity)` triples; repeats add up, zeros are dropped.
    pub fn new(n: usize, edges: &[(usize, usize, u32)]) -> Result<Self> {
        check_part_size(n)?;
        let mut multiplicity = BTreeMap::new();
        let mut total = 0u64;
        for &(i, j, k) in edges {
            check_endpoints(n, i, j)?;
            if k > 0 {
                *multiplicity.entry((i, j)).or_insert(0) += k;
                total += u64::from(k);
            }
        }
        Ok(Self {
            n,
            multiplicity,
            total,
        })
    }

    pub fn empty(n: usize) -> Result<Self> {
        Self::new(n, &[])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of possible simple edges, `n^2`.
    pub fn slots(&self) -> usize {
        self.n * self.n
    }

    pub fn multiplicity(&self, i: usize, j: usize) -> u32 {
        self.multiplicity.get(&(i, j)).copied().unwrap_or(0)
    }

    /// Edges with their multiplicities, sorted.
    pub fn edges(&self) -> impl Iterator<Item = ((usize, usize), u32)> + '_ {
        self.multiplicity.iter().map(|(&e, &k)| (e, k))
    }

    /// Sum of multiplicities (`m`).
    pub fn total_edges(&self) -> u64 {
        self.total
    }

    /// Size of the support (`Z`).
    pub fn support_size(&self) -> usize {
        self.multiplicity.len()
    }

    /// `m - Z`.
    pub fn excess(&self) -> u64 {
        self.total - self.multiplicity.len() as u64
    }

    /// Edges of multiplicity at least two; these are the cops of the configuration.
    pub fn cop_edge_count(&self) -> usize {
        self.multiplicity.values().filter(|&&k| k >= 2).count()
    }

    /// The simple graph obtained by identifying parallel edges.
    pub fn support(&self) -> BipartiteSimpleGraph {
        BipartiteSimpleGraph {
            n: self.n,
            edges: self.multiplicity.keys().copied().collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&MultigraphJson::from(self)).expect("plain struct serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let wire: MultigraphJson = serde_json::from_str(text)?;
        Self::new(wire.n, &wire.edges)
    }
}

/// Wire form: `{"n": n, "edges": [[i, j, multiplicity], ...]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MultigraphJson {
    pub n: usize,
    #[serde(default)]
    pub edges: Vec<(usize, usize, u32)>,
}

impl From<&BipartiteMultigraph> for MultigraphJson {
    fn from(g: &BipartiteMultigraph) -> Self {
        Self {
            n: g.n,
            edges: g.edges().map(|((i, j), k)| (i, j, k)).collect(),
        }
    }
}

fn check_part_size(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidDomain(
            "bipartite part size must be positive".into(),
        ));
    }
    Ok(())
}

fn check_endpoints(n: usize, i: usize, j: usize) -> Result<()> {
    if !(1..=n).contains(&i) || !(1..=n).contains(&j) {
        return Err(Error::InvalidDomain(format!(
            "edge ({i},{j}) outside parts of size {n}"
        )));
    }
    Ok(())
}

/// Vertex `(i, j)` with `c` pebbles becomes edge `{L_i, R_j}` with multiplicity `c`.
pub fn config_to_multigraph(config: &RookConfig) -> BipartiteMultigraph {
    BipartiteMultigraph {
        n: config.n(),
        multiplicity: config.pebbles().map(|(v, c)| ((v.row, v.col), c)).collect(),
        total: config.total(),
    }
}

/// Inverse of [`config_to_multigraph`].
pub fn multigraph_to_config(graph: &BipartiteMultigraph) -> RookConfig {
    let pebbles: Vec<_> = graph
        .edges()
        .map(|((i, j), k)| (GridVertex::new(i, j), k))
        .collect();
    RookConfig::from_pebbles(graph.n, &pebbles).expect("multigraph endpoints lie on the grid")
}

/// One connected component of the support of a multigraph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ComponentReport {
    pub left: Vec<usize>,
    pub right: Vec<usize>,
    pub support_edge_count: usize,
    pub cop_edge_count: usize,
    /// vertex count, both sides
    pub size: usize,
}

/// Components of the support, with vertices that touch no edge listed apart.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ComponentBreakdown {
    /// ordered by size (largest first), then by smallest vertex
    pub components: Vec<ComponentReport>,
    pub isolated_left: Vec<usize>,
    pub isolated_right: Vec<usize>,
}

impl ComponentBreakdown {
    pub fn largest(&self) -> Option<&ComponentReport> {
        self.components.first()
    }

    pub fn isolated_count(&self) -> usize {
        self.isolated_left.len() + self.isolated_right.len()
    }
}

/// Connected components over support edges. Left `i` is node `i - 1`, right `j` is node `n + j - 1`.
pub fn components_of(graph: &BipartiteMultigraph) -> ComponentBreakdown {
    let n = graph.n;
    let mut uf = UnionFind::<usize>::new(2 * n);
    let mut touched = vec![false; 2 * n];
    for ((i, j), _) in graph.edges() {
        uf.union(i - 1, n + j - 1);
        touched[i - 1] = true;
        touched[n + j - 1] = true;
    }
    let mut index_of_root: Vec<Option<usize>> = vec![None; 2 * n];
    let mut components: Vec<ComponentReport> = Vec::new();
    for v in (0..2 * n).filter(|&v| touched[v]) {
        let r = uf.find_mut(v);
        let id = *index_of_root[r].get_or_insert_with(|| {
            components.push(ComponentReport {
                left: Vec::new(),
                right: Vec::new(),
                support_edge_count: 0,
                cop_edge_count: 0,
                size: 0,
            });
            components.len() - 1
        });
        let c = &mut components[id];
        if v < n {
            c.left.push(v + 1)
        } else {
            c.right.push(v - n + 1)
        }
        c.size += 1;
    }
    for ((i, _), k) in graph.edges() {
        let id = index_of_root[uf.find_mut(i - 1)].expect("endpoint is touched");
        components[id].support_edge_count += 1;
        if k >= 2 {
            components[id].cop_edge_count += 1;
        }
    }
    // stable sort keeps discovery (smallest vertex) order among equal sizes
    components.sort_by_key(|c| std::cmp::Reverse(c.size));
    ComponentBreakdown {
        components,
        isolated_left: (1..=n).filter(|&i| !touched[i - 1]).collect(),
        isolated_right: (1..=n).filter(|&j| !touched[n + j - 1]).collect(),
    }
}
