use std::cell::OnceCell;

use petgraph::unionfind::UnionFind;
use serde::Serialize;

use super::{GridVertex, RookConfig};

/// Cops (two or more pebbles), citizens (exactly one) and robbers (none), row-major.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CitizenPartition {
    pub cops: Vec<GridVertex>,
    pub citizens: Vec<GridVertex>,
    pub robbers: Vec<GridVertex>,
}

/// One connected component of the citizen subgraph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ComponentSummary {
    /// row-major
    pub members: Vec<GridVertex>,
    pub cop_count: usize,
    pub size: usize,
}

/// Row and column statistics of one configuration, computed once and shared by
/// the solver tiers and the plan builders.
///
/// Occupied vertices are addressed by their position in the row-major list
/// [`Census::occupied`]. Every per-line list is sorted.
#[derive(Debug)]
pub struct Census<'a> {
    config: &'a RookConfig,
    occupied: Vec<GridVertex>,
    counts: Vec<u32>,
    row_members: Vec<Vec<usize>>,
    col_members: Vec<Vec<usize>>,
    row_cops: Vec<u32>,
    col_cops: Vec<u32>,
    row_sum: Vec<u64>,
    col_sum: Vec<u64>,
    cops: Vec<usize>,
    max_count: u32,
    components: OnceCell<Components>,
}

#[derive(Debug)]
struct Components {
    summaries: Vec<ComponentSummary>,
    /// component id of each occupied vertex, ids ordered like `summaries`
    of: Vec<usize>,
}

impl<'a> Census<'a> {
    pub fn new(config: &'a RookConfig) -> Self {
        let n = config.n();
        let mut census = Census {
            config,
            occupied: Vec::new(),
            counts: Vec::new(),
            row_members: vec![Vec::new(); n],
            col_members: vec![Vec::new(); n],
            row_cops: vec![0; n],
            col_cops: vec![0; n],
            row_sum: vec![0; n],
            col_sum: vec![0; n],
            cops: Vec::new(),
            max_count: 0,
            components: OnceCell::new(),
        };
        for (v, c) in config.pebbles() {
            let k = census.occupied.len();
            census.occupied.push(v);
            census.counts.push(c);
            census.row_members[v.row - 1].push(k);
            census.col_members[v.col - 1].push(k);
            census.row_sum[v.row - 1] += u64::from(c);
            census.col_sum[v.col - 1] += u64::from(c);
            if c >= 2 {
                census.cops.push(k);
                census.row_cops[v.row - 1] += 1;
                census.col_cops[v.col - 1] += 1;
            }
            census.max_count = census.max_count.max(c);
        }
        census
    }

    pub fn config(&self) -> &'a RookConfig {
        self.config
    }

    pub fn n(&self) -> usize {
        self.config.n()
    }

    pub fn total(&self) -> u64 {
        self.config.total()
    }

    pub fn occupied(&self) -> &[GridVertex] {
        &self.occupied
    }

    /// Positions (in [`Census::occupied`]) of the cops.
    pub fn cops(&self) -> &[usize] {
        &self.cops
    }

    pub fn count_at(&self, k: usize) -> u32 {
        self.counts[k]
    }

    pub fn count(&self, v: GridVertex) -> u32 {
        self.position(v).map_or(0, |k| self.counts[k])
    }

    pub fn position(&self, v: GridVertex) -> Option<usize> {
        self.occupied.binary_search(&v).ok()
    }

    pub fn max_count(&self) -> u32 {
        self.max_count
    }

    pub fn has_robocop(&self) -> bool {
        self.max_count >= 4
    }

    pub fn row_sum(&self, row: usize) -> u64 {
        self.row_sum[row - 1]
    }

    pub fn col_sum(&self, col: usize) -> u64 {
        self.col_sum[col - 1]
    }

    pub fn row_has_cop(&self, row: usize) -> bool {
        self.row_cops[row - 1] > 0
    }

    pub fn col_has_cop(&self, col: usize) -> bool {
        self.col_cops[col - 1] > 0
    }

    /// Occupied positions in `row`, by column.
    pub fn row_members(&self, row: usize) -> &[usize] {
        &self.row_members[row - 1]
    }

    /// Occupied positions in `col`, by row.
    pub fn col_members(&self, col: usize) -> &[usize] {
        &self.col_members[col - 1]
    }

    pub fn direct_catch(&self, root: GridVertex) -> bool {
        self.count(root) > 0 || self.row_has_cop(root.row) || self.col_has_cop(root.col)
    }

    /// Lexicographically smallest cop seeing `root`.
    pub fn cop_seeing(&self, root: GridVertex) -> Option<GridVertex> {
        let in_row = self
            .row_members(root.row)
            .iter()
            .copied()
            .find(|&k| self.counts[k] >= 2 && self.occupied[k] != root);
        let in_col = self
            .col_members(root.col)
            .iter()
            .copied()
            .find(|&k| self.counts[k] >= 2 && self.occupied[k] != root);
        in_row
            .into_iter()
            .chain(in_col)
            .map(|k| self.occupied[k])
            .min()
    }

    pub fn partition(&self) -> CitizenPartition {
        let mut cops = Vec::new();
        let mut citizens = Vec::new();
        for (&v, &c) in self.occupied.iter().zip(&self.counts) {
            if c >= 2 {
                cops.push(v)
            } else {
                citizens.push(v)
            }
        }
        let robbers = self
            .config
            .graph()
            .vertices()
            .filter(|&v| self.position(v).is_none())
            .collect();
        CitizenPartition {
            cops,
            citizens,
            robbers,
        }
    }

    fn component_data(&self) -> &Components {
        self.components.get_or_init(|| {
            // one union per occupied vertex with the first occupied vertex of its row and its column
            let mut uf = UnionFind::<usize>::new(self.occupied.len());
            for members in self.row_members.iter().chain(&self.col_members) {
                if let Some((&first, rest)) = members.split_first() {
                    for &k in rest {
                        uf.union(first, k);
                    }
                }
            }
            let mut id_of_root = vec![usize::MAX; self.occupied.len()];
            let mut of = vec![0; self.occupied.len()];
            let mut summaries: Vec<ComponentSummary> = Vec::new();
            for (k, slot) in of.iter_mut().enumerate() {
                let r = uf.find_mut(k);
                if id_of_root[r] == usize::MAX {
                    id_of_root[r] = summaries.len();
                    summaries.push(ComponentSummary {
                        members: Vec::new(),
                        cop_count: 0,
                        size: 0,
                    });
                }
                let id = id_of_root[r];
                *slot = id;
                let s = &mut summaries[id];
                s.members.push(self.occupied[k]);
                s.size += 1;
                if self.counts[k] >= 2 {
                    s.cop_count += 1;
                }
            }
            Components { summaries, of }
        })
    }

    pub fn components(&self) -> &[ComponentSummary] {
        &self.component_data().summaries
    }

    /// Component id (index into [`Census::components`]) of an occupied position.
    pub fn component_of(&self, k: usize) -> usize {
        self.component_data().of[k]
    }

    pub fn has_police_component(&self) -> bool {
        // a component needs two cops, so skip the union-find when there are fewer
        self.cops.len() >= 2 && self.components().iter().any(|c| c.cop_count >= 2)
    }

    /// Rows and columns touched by a component, as membership masks.
    pub fn component_lines(&self, id: usize) -> (Vec<bool>, Vec<bool>) {
        let n = self.n();
        let mut rows = vec![false; n];
        let mut cols = vec![false; n];
        for v in &self.components()[id].members {
            rows[v.row - 1] = true;
            cols[v.col - 1] = true;
        }
        (rows, cols)
    }

    /// Shortest "sees" path inside the citizen subgraph from `start` to the nearest
    /// occupied position accepted by `is_target` (other than `start`).
    ///
    /// Layers are scanned in row-major order and each vertex keeps the first
    /// parent that reaches it, so ties resolve to the lexicographically smallest
    /// choice. Returns positions from `start` to the target inclusive.
    pub fn shortest_path(
        &self,
        start: usize,
        is_target: impl Fn(usize) -> bool,
    ) -> Option<Vec<usize>> {
        let mut parent = vec![usize::MAX; self.occupied.len()];
        let mut row_done = vec![false; self.n()];
        let mut col_done = vec![false; self.n()];
        parent[start] = start;
        let mut layer = vec![start];
        while !layer.is_empty() {
            let mut next = Vec::new();
            for &u in &layer {
                let v = self.occupied[u];
                let mut nbrs: Vec<usize> = Vec::new();
                if !std::mem::replace(&mut row_done[v.row - 1], true) {
                    nbrs.extend(self.row_members(v.row));
                }
                if !std::mem::replace(&mut col_done[v.col - 1], true) {
                    nbrs.extend(self.col_members(v.col));
                }
                nbrs.sort_unstable();
                for w in nbrs {
                    if parent[w] == usize::MAX {
                        parent[w] = u;
                        next.push(w);
                    }
                }
            }
            next.sort_unstable();
            if let Some(&target) = next.iter().find(|&&w| is_target(w)) {
                let mut path = vec![target];
                let mut cur = target;
                while cur != start {
                    cur = parent[cur];
                    path.push(cur);
                }
                path.reverse();
                return Some(path);
            }
            layer = next;
        }
        None
    }
}
