//! Randomised depth-first search as a long-path finder.
//!
//! The DFS stack is always a simple path, so its maximum height over a run is a
//! lower bound on the longest path. Exact longest path is NP-hard; this is only
//! a witness finder.

use rand::seq::SliceRandom;
use rand::Rng;

use super::BipartiteSimpleGraph;
use crate::rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BipartiteVertex {
    Left(usize),
    Right(usize),
}

/// Length in edges of the longest DFS stack seen in one randomised run.
pub fn longest_path_dfs(graph: &BipartiteSimpleGraph, seed: u64) -> usize {
    let mut rng = rng::seeded(seed);
    dfs_long_path(graph, &mut rng).len().saturating_sub(1)
}

/// Runs a DFS over the whole graph, visiting start vertices in random order and
/// shuffling each adjacency list on first visit. Returns the deepest stack as
/// a vertex sequence.
pub fn dfs_long_path<R: Rng + ?Sized>(
    graph: &BipartiteSimpleGraph,
    rng: &mut R,
) -> Vec<BipartiteVertex> {
    let n = graph.n();
    // node ids: left i -> i - 1, right j -> n + j - 1
    let mut adjacency = vec![Vec::new(); 2 * n];
    for &(i, j) in graph.edges() {
        adjacency[i - 1].push(n + j - 1);
        adjacency[n + j - 1].push(i - 1);
    }
    let mut order: Vec<usize> = (0..2 * n).collect();
    order.shuffle(rng);

    let mut visited = vec![false; 2 * n];
    let mut best: Vec<usize> = Vec::new();
    // (node, next neighbour index)
    let mut stack: Vec<(usize, usize)> = Vec::new();
    for start in order {
        if visited[start] {
            continue;
        }
        visited[start] = true;
        adjacency[start].shuffle(rng);
        stack.push((start, 0));
        while let Some(top) = stack.last_mut() {
            let (u, next) = *top;
            if next < adjacency[u].len() {
                top.1 += 1;
                let w = adjacency[u][next];
                if !visited[w] {
                    visited[w] = true;
                    adjacency[w].shuffle(rng);
                    stack.push((w, 0));
                    if stack.len() > best.len() {
                        best = stack.iter().map(|&(x, _)| x).collect();
                    }
                }
            } else {
                stack.pop();
            }
        }
        if best.is_empty() {
            best.push(start);
        }
    }
    best.into_iter()
        .map(|x| {
            if x < n {
                BipartiteVertex::Left(x + 1)
            } else {
                BipartiteVertex::Right(x - n + 1)
            }
        })
        .collect()
}
