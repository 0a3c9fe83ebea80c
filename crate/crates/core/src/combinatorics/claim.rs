//! Partitions of the locator union `A_δ = ⋃_x Y_{x,δ} × Y_{x,δ}` and of the
//! two ground sets, built by greedy coloring of bounded-degree conflict
//! graphs, plus an independent checker that re-reads the four conditions.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::coloring::color_adjacency;
use crate::coarse::Relation;
use crate::rigidity::Locators;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ClaimError {
    #[error("need 0 < eta <= delta, got eta = {eta}, delta = {delta}")]
    BadParameters { delta: f64, eta: f64 },
    #[error("locator families live on different ground sets")]
    Mismatch,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClaimPartition {
    pub delta: f64,
    pub eta: f64,
    pub b_pieces: Vec<Relation>,
    pub x_pieces: Vec<Vec<usize>>,
    pub y_pieces: Vec<Vec<usize>>,
    /// Largest locator size over both scales.
    pub n: usize,
}

impl ClaimPartition {
    /// Degree bounds for the three conflict graphs in terms of `n`, plus one.
    pub fn piece_bounds(&self) -> (usize, usize, usize) {
        let n = self.n;
        // pairs sharing a row or a column: 2(n² - 1); sharing some Y_x × Y_x: n(n² - 1)
        let b = if n == 0 { 0 } else { 2 * (n * n - 1) + n * (n * n - 1) + 1 };
        let xy = if n == 0 { 1 } else { n * (n - 1) + 1 };
        (b, xy, xy)
    }
}

/// The union `A_δ`, as a relation on the target ground set.
pub fn locator_union(loc: &Locators) -> Relation {
    Relation::from_pairs(
        loc.target_size(),
        loc.y_of
            .iter()
            .flat_map(|ys| ys.iter().flat_map(move |&a| ys.iter().map(move |&b| (a, b)))),
    )
    .expect("locators index the target")
}

fn clique_edges(groups: impl Iterator<Item = Vec<usize>>, n: usize) -> Vec<BTreeSet<usize>> {
    let mut adj = vec![BTreeSet::new(); n];
    for g in groups {
        for &u in &g {
            for &v in &g {
                if u != v {
                    adj[u].insert(v);
                }
            }
        }
    }
    adj
}

fn classes(color: &[usize], num: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new(); num];
    for (v, &c) in color.iter().enumerate() {
        out[c].push(v);
    }
    out
}

pub fn claim_partitions(at_delta: &Locators, at_eta: &Locators) -> Result<ClaimPartition, ClaimError> {
    let (delta, eta) = (at_delta.delta, at_eta.delta);
    if !(eta > 0.0 && eta <= delta) {
        return Err(ClaimError::BadParameters { delta, eta });
    }
    if at_delta.source_size() != at_eta.source_size() || at_delta.target_size() != at_eta.target_size() {
        return Err(ClaimError::Mismatch);
    }
    let n = at_delta.max_size().max(at_eta.max_size());

    // Conflict graph on A_δ.
    let a = locator_union(at_delta);
    let vertices: Vec<(usize, usize)> = a.iter().collect();
    let index: BTreeMap<(usize, usize), usize> = vertices.iter().enumerate().map(|(i, &p)| (p, i)).collect();
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut by_row: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    let mut by_col: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (i, &(r, c)) in vertices.iter().enumerate() {
        by_row.entry(r).or_default().push(i);
        by_col.entry(c).or_default().push(i);
    }
    groups.extend(by_row.into_values());
    groups.extend(by_col.into_values());
    let index = &index;
    for ys in &at_delta.y_of {
        groups.push(
            ys.iter()
                .flat_map(|&p| ys.iter().map(move |&q| index[&(p, q)]))
                .collect(),
        );
    }
    let b_color = color_adjacency(&clique_edges(groups.into_iter(), vertices.len()));
    let b_pieces = classes(&b_color.color, b_color.num_colors)
        .into_iter()
        .map(|members| {
            Relation::from_pairs(a.size(), members.into_iter().map(|i| vertices[i]))
                .expect("pairs of A_δ are in range")
        })
        .collect();

    // x ~ x' when Y_{x,η} meets Y_{x',η}: every X_{y,η} is a clique.
    let x_adj = clique_edges(at_eta.x_of.iter().map(|s| s.iter().copied().collect()), at_eta.source_size());
    let x_color = color_adjacency(&x_adj);
    let y_adj = clique_edges(at_eta.y_of.iter().map(|s| s.iter().copied().collect()), at_eta.target_size());
    let y_color = color_adjacency(&y_adj);

    Ok(ClaimPartition {
        delta,
        eta,
        b_pieces,
        x_pieces: classes(&x_color.color, x_color.num_colors),
        y_pieces: classes(&y_color.color, y_color.num_colors),
        n,
    })
}

/// First violated condition found by [`verify_claim_partition`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "violation", rename_all = "snake_case")]
pub enum ClaimViolation {
    BPiecesNotPartition,
    SectionNotSingleton { piece: usize, pairs: [(usize, usize); 2] },
    LocatorSquareTrace { piece: usize, point: usize },
    XPiecesNotPartition,
    YPiecesNotPartition,
    XOverlap { piece: usize, points: (usize, usize) },
    YOverlap { piece: usize, points: (usize, usize) },
}

/// Checks, by enumeration:
/// 1. every horizontal and vertical section of every `B_i` has at most one point;
/// 2. `(Y_{x,δ} × Y_{x,δ}) ∩ B_i` has at most one point for all `x`;
/// 3. distinct `x, x'` in one X-piece have disjoint `Y_{x,η}`, `Y_{x',η}`;
/// 4. distinct `y, y'` in one Y-piece have disjoint `X_{y,η}`, `X_{y',η}`;
///
/// and that the pieces partition `A_δ`, `X` and `Y`.
pub fn verify_claim_partition(
    p: &ClaimPartition,
    at_delta: &Locators,
    at_eta: &Locators,
) -> Result<(), ClaimViolation> {
    let mut a = BTreeSet::new();
    for x in 0..at_delta.source_size() {
        for &y in &at_delta.y_of[x] {
            for &y2 in &at_delta.y_of[x] {
                a.insert((y, y2));
            }
        }
    }
    let mut covered = BTreeSet::new();
    for piece in &p.b_pieces {
        for pair in piece.iter() {
            if !covered.insert(pair) {
                return Err(ClaimViolation::BPiecesNotPartition);
            }
        }
    }
    if covered != a {
        return Err(ClaimViolation::BPiecesNotPartition);
    }

    for (i, piece) in p.b_pieces.iter().enumerate() {
        let pairs: Vec<_> = piece.iter().collect();
        for (j, &u) in pairs.iter().enumerate() {
            for &v in &pairs[j + 1..] {
                if u.0 == v.0 || u.1 == v.1 {
                    return Err(ClaimViolation::SectionNotSingleton { piece: i, pairs: [u, v] });
                }
            }
        }
        for x in 0..at_delta.source_size() {
            let ys = &at_delta.y_of[x];
            let trace = pairs.iter().filter(|(r, c)| ys.contains(r) && ys.contains(c)).count();
            if trace > 1 {
                return Err(ClaimViolation::LocatorSquareTrace { piece: i, point: x });
            }
        }
    }

    let is_partition = |pieces: &[Vec<usize>], n: usize| {
        let mut all: Vec<usize> = pieces.iter().flatten().copied().collect();
        all.sort_unstable();
        all == (0..n).collect::<Vec<_>>()
    };
    if !is_partition(&p.x_pieces, at_eta.source_size()) {
        return Err(ClaimViolation::XPiecesNotPartition);
    }
    if !is_partition(&p.y_pieces, at_eta.target_size()) {
        return Err(ClaimViolation::YPiecesNotPartition);
    }
    for (i, piece) in p.x_pieces.iter().enumerate() {
        for (j, &x) in piece.iter().enumerate() {
            for &x2 in &piece[j + 1..] {
                if !at_eta.y_of[x].is_disjoint(&at_eta.y_of[x2]) {
                    return Err(ClaimViolation::XOverlap { piece: i, points: (x, x2) });
                }
            }
        }
    }
    for (i, piece) in p.y_pieces.iter().enumerate() {
        for (j, &y) in piece.iter().enumerate() {
            for &y2 in &piece[j + 1..] {
                if !at_eta.x_of[y].is_disjoint(&at_eta.x_of[y2]) {
                    return Err(ClaimViolation::YOverlap { piece: i, points: (y, y2) });
                }
            }
        }
    }
    Ok(())
}
