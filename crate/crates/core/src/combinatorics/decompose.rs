//! Splitting a relation into graphs of partial bijections.
//!
//! A relation `E` is a bipartite graph between row indices and column
//! indices; a partial bijection is a matching, so a partition into partial
//! bijections is a proper edge coloring. Bipartite graphs are edge-colorable
//! with exactly `Δ = max(row bound, col bound)` colors.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::coarse::Relation;

/// Graph of a partial bijection: first coordinates distinct, second
/// coordinates distinct.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartialBijection {
    pairs: Vec<(usize, usize)>,
}

impl PartialBijection {
    /// `None` unless both coordinate projections are injective.
    pub fn new(mut pairs: Vec<(usize, usize)>) -> Option<Self> {
        pairs.sort_unstable();
        pairs.dedup();
        let rows: BTreeSet<usize> = pairs.iter().map(|p| p.0).collect();
        let cols: BTreeSet<usize> = pairs.iter().map(|p| p.1).collect();
        (rows.len() == pairs.len() && cols.len() == pairs.len()).then_some(Self { pairs })
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DecomposeStrategy {
    /// Alternating-path recoloring; uses exactly `Δ` pieces.
    #[default]
    Konig,
    /// First color free at both endpoints; at most `2Δ - 1` pieces.
    Greedy,
}

pub fn decompose_partial_bijections(e: &Relation) -> Vec<PartialBijection> {
    decompose_with(e, DecomposeStrategy::Konig)
}

pub fn decompose_with(e: &Relation, strategy: DecomposeStrategy) -> Vec<PartialBijection> {
    let n = e.size();
    let (rb, cb) = e.section_bounds();
    let delta = rb.max(cb);
    let colors = match strategy {
        DecomposeStrategy::Konig => delta,
        DecomposeStrategy::Greedy => (2 * delta).saturating_sub(1),
    };
    let mut state = EdgeColoring::new(n, colors);
    for (x, y) in e.iter() {
        match strategy {
            DecomposeStrategy::Konig => state.insert_konig(x, y),
            DecomposeStrategy::Greedy => state.insert_greedy(x, y),
        }
    }
    state.pieces()
}

/// `at_row[x][c]` is the column joined to row `x` by color `c`, and
/// `at_col[y][c]` the row joined to column `y`.
struct EdgeColoring {
    at_row: Vec<Vec<Option<usize>>>,
    at_col: Vec<Vec<Option<usize>>>,
}

impl EdgeColoring {
    fn new(n: usize, colors: usize) -> Self {
        Self {
            at_row: vec![vec![None; colors]; n],
            at_col: vec![vec![None; colors]; n],
        }
    }

    fn free_at_row(&self, x: usize) -> usize {
        self.at_row[x].iter().position(Option::is_none).expect("degree below color count")
    }

    fn free_at_col(&self, y: usize) -> usize {
        self.at_col[y].iter().position(Option::is_none).expect("degree below color count")
    }

    fn set(&mut self, x: usize, y: usize, c: usize) {
        self.at_row[x][c] = Some(y);
        self.at_col[y][c] = Some(x);
    }

    fn insert_greedy(&mut self, x: usize, y: usize) {
        let c = (0..self.at_row[x].len())
            .find(|&c| self.at_row[x][c].is_none() && self.at_col[y][c].is_none())
            .expect("2Δ-1 colors always leave one free");
        self.set(x, y, c);
    }

    fn insert_konig(&mut self, x: usize, y: usize) {
        let a = self.free_at_row(x);
        if self.at_col[y][a].is_none() {
            self.set(x, y, a);
            return;
        }
        let b = self.free_at_col(y);
        // Walk the a/b alternating path from column y: y -a- x1 -b- y2 -a- ...
        // It cannot reach row x (a is free there), so swapping a and b on it
        // frees a at y.
        let mut path = Vec::new();
        let mut col = y;
        loop {
            let Some(row) = self.at_col[col][a] else { break };
            path.push((row, col, a));
            let Some(next) = self.at_row[row][b] else { break };
            path.push((row, next, b));
            col = next;
        }
        for &(r, c, color) in &path {
            self.at_row[r][color] = None;
            self.at_col[c][color] = None;
        }
        for &(r, c, color) in &path {
            let swapped = if color == a { b } else { a };
            self.set(r, c, swapped);
        }
        self.set(x, y, a);
    }

    fn pieces(&self) -> Vec<PartialBijection> {
        let colors = self.at_row.first().map_or(0, Vec::len);
        (0..colors)
            .map(|c| {
                let pairs = self
                    .at_row
                    .iter()
                    .enumerate()
                    .filter_map(|(x, row)| row[c].map(|y| (x, y)))
                    .collect();
                PartialBijection::new(pairs).expect("color classes are matchings")
            })
            .filter(|p| !p.is_empty())
            .collect()
    }
}
