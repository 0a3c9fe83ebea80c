//! Operator-norm localization probing.
//!
//! For an operator `a` supported in `level(kE)` we look for a unit vector
//! `ξ` supported in a small set with `‖aξ‖ >= (1 - 1/m)‖a‖`. Candidate sets
//! are the balls `{y : (x, y) ∈ level(k)}`; the best vector on a ball `B` is
//! the top right singular vector of `a·χ_B`, so the achieved ratio at scale
//! `k` is `max_x ‖a·χ_{B_k(x)}‖ / ‖a‖`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::norm::{spectral_norm, top_singular};
use super::operator::SparseOperator;
use super::random::{random_on_support, stream_rng};
use crate::coarse::{CoarseFiltration, FiltrationError, Relation};

/// Slack on the localization inequality at floating-point precision.
pub const RATIO_SLACK: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OnlError {
    #[error(transparent)]
    Filtration(#[from] FiltrationError),
    #[error("m must be at least 1")]
    BadM,
    #[error("operator is {rows}x{cols}, filtration has {size} points")]
    Shape { rows: usize, cols: usize, size: usize },
}

/// Best ball at one scale.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BallRatio {
    pub level: usize,
    pub center: usize,
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OnlSample {
    pub index: usize,
    pub norm: f64,
    /// Minimal ball level reaching the threshold, if any within the cap.
    pub level: Option<usize>,
    pub ratio: f64,
    pub center: usize,
    /// Least `k'` with `supp(ξ) × supp(ξ) ⊆ level(k')`.
    pub bounded_level: Option<usize>,
    /// Unit witness as `(index, re, im)` triples.
    pub witness: Vec<(usize, f64, f64)>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OnlReport {
    pub e_level: usize,
    pub m: usize,
    pub threshold: f64,
    /// Minimal ball level at which every sample passes; `None` is a refusal
    /// at the cap.
    pub localization_level: Option<usize>,
    pub worst_ratio: f64,
    pub worst_sample: usize,
    pub samples: Vec<OnlSample>,
}

fn check_shape(filtration: &CoarseFiltration, a: &SparseOperator) -> Result<(), OnlError> {
    let size = filtration.size();
    if a.rows() != size || a.cols() != size {
        return Err(OnlError::Shape {
            rows: a.rows(),
            cols: a.cols(),
            size,
        });
    }
    Ok(())
}

fn best_ball(filtration: &CoarseFiltration, a: &SparseOperator, norm: f64, k: usize) -> BallRatio {
    let mut best = BallRatio {
        level: k,
        center: 0,
        ratio: 0.0,
    };
    if norm == 0.0 {
        best.ratio = 1.0;
        return best;
    }
    for x in 0..filtration.size() {
        let local = spectral_norm(&a.restrict_columns(&filtration.ball(x, k)));
        let ratio = (local / norm).min(1.0);
        if ratio > best.ratio {
            best = BallRatio {
                level: k,
                center: x,
                ratio,
            };
        }
    }
    best
}

/// Achieved ratio for every ball level `0..=k_max`.
pub fn ratio_table(
    filtration: &CoarseFiltration,
    a: &SparseOperator,
    k_max: usize,
) -> Result<Vec<BallRatio>, OnlError> {
    check_shape(filtration, a)?;
    let norm = spectral_norm(a);
    Ok((0..=k_max).map(|k| best_ball(filtration, a, norm, k)).collect())
}

/// Localizes a single operator: minimal ball level reaching
/// `(1 - 1/m)‖a‖`, searching up to the filtration cap.
pub fn localize(
    filtration: &CoarseFiltration,
    a: &SparseOperator,
    m: usize,
) -> Result<(f64, Option<BallRatio>, BallRatio), OnlError> {
    check_shape(filtration, a)?;
    if m == 0 {
        return Err(OnlError::BadM);
    }
    let threshold = 1.0 - 1.0 / m as f64;
    let norm = spectral_norm(a);
    let mut last = best_ball(filtration, a, norm, 0);
    for k in 0..=filtration.max_level() {
        let best = if k == 0 { last } else { best_ball(filtration, a, norm, k) };
        last = best;
        if best.ratio >= threshold - RATIO_SLACK {
            return Ok((norm, Some(best), best));
        }
    }
    Ok((norm, None, last))
}

fn witness_for(
    filtration: &CoarseFiltration,
    a: &SparseOperator,
    ball: BallRatio,
) -> (Vec<(usize, f64, f64)>, Option<usize>) {
    let support = filtration.ball(ball.center, ball.level);
    let (_, v) = top_singular(&a.restrict_columns(&support));
    let witness: Vec<(usize, f64, f64)> = if v.iter().all(|z| z.norm() == 0.0) {
        // zero operator: any unit vector works
        vec![(ball.center, 1.0, 0.0)]
    } else {
        v.iter()
            .enumerate()
            .filter(|(_, z)| z.norm() > 0.0)
            .map(|(i, z)| (i, z.re, z.im))
            .collect()
    };
    let idx: Vec<usize> = witness.iter().map(|w| w.0).collect();
    let square = Relation::from_pairs(
        filtration.size(),
        idx.iter().flat_map(|&p| idx.iter().map(move |&q| (p, q))),
    )
    .expect("witness indices in range");
    let bounded = filtration.membership_level(&square).ok().and_then(|c| c.level());
    (witness, bounded)
}

/// Samples `num_samples` Gaussian operators supported in `level(e_level)`
/// and reports the least ball level localizing all of them.
pub fn onl_probe(
    filtration: &CoarseFiltration,
    e_level: usize,
    m: usize,
    num_samples: usize,
    seed: u64,
) -> Result<OnlReport, OnlError> {
    if m == 0 {
        return Err(OnlError::BadM);
    }
    let support = filtration.level(e_level)?;
    let samples: Vec<OnlSample> = (0..num_samples)
        .into_par_iter()
        .map(|index| {
            let mut rng = stream_rng(seed, index as u64);
            let a = random_on_support(&support, &mut rng);
            probe_one(filtration, &a, m, index)
        })
        .collect::<Result<_, _>>()?;
    let level = samples
        .iter()
        .map(|s| s.level)
        .try_fold(0usize, |acc, l| l.map(|l| acc.max(l)));
    let (worst_sample, worst_ratio) = samples
        .iter()
        .map(|s| (s.index, s.ratio))
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .unwrap_or((0, 1.0));
    Ok(OnlReport {
        e_level,
        m,
        threshold: 1.0 - 1.0 / m as f64,
        localization_level: level,
        worst_ratio,
        worst_sample,
        samples,
    })
}

/// Probe a given operator (as sample `index`).
pub fn probe_one(
    filtration: &CoarseFiltration,
    a: &SparseOperator,
    m: usize,
    index: usize,
) -> Result<OnlSample, OnlError> {
    let (norm, found, last) = localize(filtration, a, m)?;
    let ball = found.unwrap_or(last);
    let (witness, bounded_level) = witness_for(filtration, a, ball);
    Ok(OnlSample {
        index,
        norm,
        level: found.map(|b| b.level),
        ratio: ball.ratio,
        center: ball.center,
        bounded_level,
        witness,
    })
}
