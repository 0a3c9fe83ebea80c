//! Greedy vertex coloring of bounded-degree graphs.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ColoringError {
    #[error("vertex {vertex} has degree {degree}, bound requires < {bound}")]
    DegreeTooLarge { vertex: usize, degree: usize, bound: usize },
    #[error("edge ({0}, {1}) is out of range")]
    OutOfRange(usize, usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Coloring {
    pub color: Vec<usize>,
    pub num_colors: usize,
}

impl Coloring {
    /// Color classes, each in increasing vertex order.
    pub fn classes(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.num_colors];
        for (v, &c) in self.color.iter().enumerate() {
            out[c].push(v);
        }
        out
    }

    pub fn is_proper(&self, edges: &[(usize, usize)]) -> bool {
        edges.iter().all(|&(u, v)| u == v || self.color[u] != self.color[v])
    }
}

/// Deduplicated neighbour lists, self-loops dropped.
pub fn adjacency(num_vertices: usize, edges: &[(usize, usize)]) -> Result<Vec<BTreeSet<usize>>, ColoringError> {
    let mut adj = vec![BTreeSet::new(); num_vertices];
    for &(u, v) in edges {
        if u >= num_vertices || v >= num_vertices {
            return Err(ColoringError::OutOfRange(u, v));
        }
        if u != v {
            adj[u].insert(v);
            adj[v].insert(u);
        }
    }
    Ok(adj)
}

/// Colors vertices in index order with the smallest free color. Every degree
/// must be `< degree_bound`, so at most `degree_bound` colors are used.
pub fn greedy_coloring(
    num_vertices: usize,
    edges: &[(usize, usize)],
    degree_bound: usize,
) -> Result<Coloring, ColoringError> {
    let adj = adjacency(num_vertices, edges)?;
    if let Some((vertex, nbrs)) = adj.iter().enumerate().find(|(_, n)| n.len() >= degree_bound) {
        return Err(ColoringError::DegreeTooLarge {
            vertex,
            degree: nbrs.len(),
            bound: degree_bound,
        });
    }
    Ok(color_adjacency(&adj))
}

pub(crate) fn color_adjacency(adj: &[BTreeSet<usize>]) -> Coloring {
    let mut color = vec![usize::MAX; adj.len()];
    let mut num_colors = 0;
    for v in 0..adj.len() {
        let used: BTreeSet<usize> = adj[v]
            .iter()
            .map(|&u| color[u])
            .filter(|&c| c != usize::MAX)
            .collect();
        let c = (0..).find(|c| !used.contains(c)).expect("unbounded range");
        color[v] = c;
        num_colors = num_colors.max(c + 1);
    }
    Coloring { color, num_colors }
}
