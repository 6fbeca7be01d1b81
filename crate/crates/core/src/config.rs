//! Pebble configurations and the pebbling move.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::SimpleGraph;

/// Pebble counts on every vertex of a host graph.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PebbleConfiguration {
    counts: Vec<u32>,
    total: u64,
}

impl PebbleConfiguration {
    pub fn new(counts: Vec<u32>) -> Self {
        let total = counts.iter().map(|&c| u64::from(c)).sum();
        Self { counts, total }
    }

    pub fn empty(vertex_count: usize) -> Self {
        Self {
            counts: vec![0; vertex_count],
            total: 0,
        }
    }

    /// Builds a configuration from `(vertex, count)` pairs; repeated vertices add up.
    pub fn from_sparse(vertex_count: usize, entries: &[(usize, u32)]) -> Result<Self> {
        let mut counts = vec![0u32; vertex_count];
        for &(v, c) in entries {
            let slot = counts.get_mut(v).ok_or(Error::VertexOutOfRange {
                vertex: v,
                vertex_count,
            })?;
            *slot += c;
        }
        Ok(Self::new(counts))
    }

    pub fn vertex_count(&self) -> usize {
        self.counts.len()
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn counts(&self) -> &[u32] {
        &self.counts
    }

    pub fn count(&self, v: usize) -> u32 {
        self.counts[v]
    }

    pub fn into_counts(self) -> Vec<u32> {
        self.counts
    }

    /// Vertices holding at least one pebble, with their counts.
    pub fn occupied(&self) -> impl Iterator<Item = (usize, u32)> + '_ {
        self.counts
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(|(v, &c)| (v, c))
    }

    pub fn max_count(&self) -> u32 {
        self.counts.iter().copied().max().unwrap_or(0)
    }

    /// True when every count of `self` is at least the matching count of `other`.
    pub fn dominates(&self, other: &Self) -> bool {
        self.counts.len() == other.counts.len()
            && self.counts.iter().zip(&other.counts).all(|(a, b)| a >= b)
    }

    /// One pebbling step: two pebbles leave `from`, one arrives at `to`.
    pub fn apply_move(&self, from: usize, to: usize, graph: &SimpleGraph) -> Result<Self> {
        if graph.vertex_count() != self.vertex_count() {
            return Err(Error::InvalidDomain(format!(
                "configuration has {} vertices, graph has {}",
                self.vertex_count(),
                graph.vertex_count()
            )));
        }
        graph.check_vertex(from)?;
        graph.check_vertex(to)?;
        if !graph.is_adjacent(from, to) {
            return Err(Error::NotAnEdge(from, to));
        }
        let held = self.counts[from];
        if held < 2 {
            return Err(Error::IllegalMove { vertex: from, held });
        }
        let mut next = self.clone();
        next.counts[from] -= 2;
        next.counts[to] += 1;
        next.total -= 1;
        Ok(next)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&ConfigurationJson {
            n_vertices: self.vertex_count(),
            counts: self.counts.clone(),
        })
        .expect("plain struct serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let wire: ConfigurationJson = serde_json::from_str(text)?;
        wire.try_into()
    }
}

/// Wire form: `{"n_vertices": N, "counts": [c0, ...]}`. Missing trailing counts are zero.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConfigurationJson {
    pub n_vertices: usize,
    #[serde(default)]
    pub counts: Vec<u32>,
}

impl TryFrom<ConfigurationJson> for PebbleConfiguration {
    type Error = Error;

    fn try_from(wire: ConfigurationJson) -> Result<Self> {
        if wire.n_vertices == 0 {
            return Err(Error::InvalidDomain("n_vertices must be positive".into()));
        }
        if wire.counts.len() > wire.n_vertices {
            return Err(Error::Parse(format!(
                "{} counts given for {} vertices",
                wire.counts.len(),
                wire.n_vertices
            )));
        }
        let mut counts = wire.counts;
        counts.resize(wire.n_vertices, 0);
        Ok(Self::new(counts))
    }
}
