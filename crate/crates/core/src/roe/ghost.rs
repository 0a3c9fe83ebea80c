//! Ghost profiles: how fast matrix entries vanish off an exhaustion.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::operator::SparseOperator;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GhostError {
    #[error("exhaustion is not increasing at step {0}")]
    NotIncreasing(usize),
}

/// `eps[m]` is the largest `|entry(y, x)|` with `(x, y) ∉ A_m × A_m`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GhostProfile {
    pub exhaustion: Vec<Vec<usize>>,
    pub eps: Vec<f64>,
}

impl GhostProfile {
    /// Whether the last set already contains every row and column in use.
    pub fn covers_support(&self) -> bool {
        self.eps.last().is_some_and(|&e| e == 0.0)
    }
}

pub fn ghost_profile(a: &SparseOperator, exhaustion: &[Vec<usize>]) -> Result<GhostProfile, GhostError> {
    let sets: Vec<BTreeSet<usize>> = exhaustion.iter().map(|s| s.iter().copied().collect()).collect();
    for (m, pair) in sets.windows(2).enumerate() {
        if !pair[0].is_subset(&pair[1]) {
            return Err(GhostError::NotIncreasing(m + 1));
        }
    }
    let eps = sets
        .iter()
        .map(|set| {
            a.iter()
                .filter(|&((y, x), _)| !(set.contains(&x) && set.contains(&y)))
                .map(|(_, v)| v.norm())
                .fold(0.0, f64::max)
        })
        .collect();
    Ok(GhostProfile {
        exhaustion: sets.into_iter().map(|s| s.into_iter().collect()).collect(),
        eps,
    })
}

/// Initial segments `{0}, {0, 1}, .., {0, .., n-1}`.
pub fn initial_segments(n: usize) -> Vec<Vec<usize>> {
    (1..=n).map(|m| (0..m).collect()).collect()
}
