//! Checking explicit property-A witnesses `x ↦ ξ_x`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::norm::l2;
use crate::coarse::{CoarseFiltration, FiltrationError};

const UNIT_TOL: f64 = 1e-12;

/// First condition that fails for a candidate witness family.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "condition", rename_all = "snake_case")]
pub enum PropertyAFailure {
    WrongShape { expected: usize },
    NotUnit { point: usize, norm: f64 },
    SupportEscapes { point: usize, outside: usize },
    TooFarApart { pair: (usize, usize), distance: f64, bound: f64 },
}

/// Checks that every `ξ_x` is a unit vector supported in the level-`kf`
/// ball around `x`, and that `‖ξ_x - ξ_x'‖ < 1/m` for all `(x, x')` in
/// `level(ke)`.
pub fn check_property_a_witness(
    filtration: &CoarseFiltration,
    ke: usize,
    m: usize,
    kf: usize,
    xi: &[Vec<Complex64>],
) -> Result<Result<(), PropertyAFailure>, FiltrationError> {
    let n = filtration.size();
    if xi.len() != n || xi.iter().any(|v| v.len() != n) {
        return Ok(Err(PropertyAFailure::WrongShape { expected: n }));
    }
    let spread = filtration.level(kf)?;
    for (x, v) in xi.iter().enumerate() {
        let norm = l2(v);
        if (norm - 1.0).abs() > UNIT_TOL {
            return Ok(Err(PropertyAFailure::NotUnit { point: x, norm }));
        }
        if let Some(outside) = (0..n).find(|&y| v[y].norm() != 0.0 && !spread.contains(x, y)) {
            return Ok(Err(PropertyAFailure::SupportEscapes { point: x, outside }));
        }
    }
    let bound = 1.0 / m as f64;
    for (x, y) in filtration.level(ke)?.iter() {
        let distance = xi[x]
            .iter()
            .zip(&xi[y])
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt();
        if distance >= bound {
            return Ok(Err(PropertyAFailure::TooFarApart {
                pair: (x, y),
                distance,
                bound,
            }));
        }
    }
    Ok(Ok(()))
}

pub fn property_a_witness_holds(
    filtration: &CoarseFiltration,
    ke: usize,
    m: usize,
    kf: usize,
    xi: &[Vec<Complex64>],
) -> Result<bool, FiltrationError> {
    Ok(check_property_a_witness(filtration, ke, m, kf, xi)?.is_ok())
}

/// Normalized windows `ξ_x ∝ χ_{[x, x+w) ∩ X}` on `{0, .., n-1}`.
pub fn window_vectors(n: usize, w: usize) -> Vec<Vec<Complex64>> {
    (0..n)
        .map(|x| {
            let hi = (x + w).min(n);
            let c = Complex64::new(1.0 / ((hi - x) as f64).sqrt(), 0.0);
            (0..n).map(|y| if (x..hi).contains(&y) { c } else { Complex64::default() }).collect()
        })
        .collect()
}
