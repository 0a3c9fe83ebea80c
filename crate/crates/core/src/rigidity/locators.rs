//! Isometry checks, locator sets and concentration.
//!
//! With `Φ(a) = U a U*` and `Ψ(b) = U* b U`, both locator quantities reduce
//! to rank-one norms:
//!
//! ```text
//! ‖Φ(e_xx) e_yy Φ(1)‖ = ‖Uδ_x‖ · |U_yx| · ‖UU*δ_y‖ = |U_yx| · ‖U*δ_y‖
//! ‖Ψ(e_yy) e_xx‖      = ‖U*δ_y‖ · |U_yx|
//! ```
//!
//! for an isometry `U`, so `y ∈ Y_{x,δ}` and `x ∈ X_{y,δ}` test the same
//! number and are symmetric by construction. [`locator_value_dense`] keeps
//! the unreduced product for oracle tests.

use std::collections::BTreeSet;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::RigidityError;
use crate::roe::{dense_spectral_norm, spectral_norm, SparseOperator};

pub const DEFAULT_ISOMETRY_TOL: f64 = 1e-10;

/// An operator `U: ℓ2(X) → ℓ2(Y)` that passed the isometry check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IsometryData {
    pub u: SparseOperator,
    pub tol: f64,
    /// `‖U*U - I‖` at check time.
    pub defect: f64,
}

impl IsometryData {
    pub fn check(u: &SparseOperator, tol: f64) -> Result<Self, RigidityError> {
        let defect = isometry_defect(u);
        if defect > tol {
            return Err(RigidityError::NotIsometry { defect, tol });
        }
        Ok(Self {
            u: u.clone(),
            tol,
            defect,
        })
    }

    pub fn source_size(&self) -> usize {
        self.u.cols()
    }

    pub fn target_size(&self) -> usize {
        self.u.rows()
    }
}

/// `‖U*U - I‖`.
pub fn isometry_defect(u: &SparseOperator) -> f64 {
    let gram = u.adjoint().matmul(u).expect("U*U is always defined");
    spectral_norm(&gram.sub(&SparseOperator::identity(u.cols())).expect("square"))
}

/// `‖U*U - I‖ <= tol`, after checking `U` maps `ℓ2(source)` into `ℓ2(target)`.
pub fn check_isometry(
    u: &SparseOperator,
    source_size: usize,
    target_size: usize,
    tol: f64,
) -> Result<bool, RigidityError> {
    if u.cols() != source_size || u.rows() != target_size {
        return Err(RigidityError::Shape {
            expected: (target_size, source_size),
            got: u.shape(),
        });
    }
    Ok(isometry_defect(u) <= tol)
}

/// `Y_{x,δ}` for every source point and `X_{y,δ}` for every target point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Locators {
    pub delta: f64,
    pub y_of: Vec<BTreeSet<usize>>,
    pub x_of: Vec<BTreeSet<usize>>,
    /// `‖U*δ_y‖`, the weight of `y` under `Φ(1)`.
    pub row_weight: Vec<f64>,
}

impl Locators {
    /// Locators given directly by the `Y_{x,δ}` family; `X_{y,δ}` is its
    /// transpose and every target point gets weight one.
    pub fn from_y_of(delta: f64, target_size: usize, y_of: Vec<BTreeSet<usize>>) -> Self {
        let mut x_of = vec![BTreeSet::new(); target_size];
        for (x, ys) in y_of.iter().enumerate() {
            for &y in ys {
                x_of[y].insert(x);
            }
        }
        Self {
            delta,
            y_of,
            x_of,
            row_weight: vec![1.0; target_size],
        }
    }

    pub fn source_size(&self) -> usize {
        self.y_of.len()
    }

    pub fn target_size(&self) -> usize {
        self.x_of.len()
    }

    pub fn max_size(&self) -> usize {
        self.y_of
            .iter()
            .chain(&self.x_of)
            .map(BTreeSet::len)
            .max()
            .unwrap_or(0)
    }

    /// Whether `y ∈ Y_{x,δ} ⟺ x ∈ X_{y,δ}` for all pairs.
    pub fn is_symmetric(&self) -> bool {
        self.y_of
            .iter()
            .enumerate()
            .all(|(x, ys)| ys.iter().all(|&y| self.x_of[y].contains(&x)))
            && self
                .x_of
                .iter()
                .enumerate()
                .all(|(y, xs)| xs.iter().all(|&x| self.y_of[x].contains(&y)))
    }

    pub fn empty_sources(&self) -> Vec<usize> {
        (0..self.source_size()).filter(|&x| self.y_of[x].is_empty()).collect()
    }
}

/// Closed-form locator value `|U_yx| · ‖U*δ_y‖`.
pub fn locator_value(u: &SparseOperator, row_norms: &[f64], x: usize, y: usize) -> f64 {
    u.get(y, x).norm() * row_norms[y]
}

/// `‖Φ(e_xx) e_yy Φ(1)‖` from explicit dense products and a full SVD.
pub fn locator_value_dense(u: &DMatrix<Complex64>, x: usize, y: usize) -> f64 {
    let (m, n) = u.shape();
    let mut e_xx = DMatrix::<Complex64>::zeros(n, n);
    e_xx[(x, x)] = Complex64::new(1.0, 0.0);
    let mut e_yy = DMatrix::<Complex64>::zeros(m, m);
    e_yy[(y, y)] = Complex64::new(1.0, 0.0);
    let phi_exx = u * e_xx * u.adjoint();
    let phi_one = u * u.adjoint();
    dense_spectral_norm(&(phi_exx * e_yy * phi_one))
}

/// `‖Ψ(e_yy) e_xx‖` from explicit dense products.
pub fn dual_locator_value_dense(u: &DMatrix<Complex64>, x: usize, y: usize) -> f64 {
    let (m, n) = u.shape();
    let mut e_yy = DMatrix::<Complex64>::zeros(m, m);
    e_yy[(y, y)] = Complex64::new(1.0, 0.0);
    let mut e_xx = DMatrix::<Complex64>::zeros(n, n);
    e_xx[(x, x)] = Complex64::new(1.0, 0.0);
    dense_spectral_norm(&(u.adjoint() * e_yy * u * e_xx))
}

/// `Y_{x,δ} = {y : ‖Φ(e_xx) e_yy Φ(1)‖ > δ}` and the dual family, via the
/// closed form. Only stored entries of `U` can contribute.
pub fn locator_sets(u: &SparseOperator, delta: f64) -> Result<Locators, RigidityError> {
    if !(delta > 0.0) {
        return Err(RigidityError::BadDelta(delta));
    }
    let row_weight = u.row_norms();
    let columns = u.columns();
    let y_of: Vec<BTreeSet<usize>> = columns
        .par_iter()
        .enumerate()
        .map(|(x, col)| {
            col.iter()
                .filter(|&&(y, _)| locator_value(u, &row_weight, x, y) > delta)
                .map(|&(y, _)| y)
                .collect()
        })
        .collect();
    let mut x_of = vec![BTreeSet::new(); u.rows()];
    for (x, ys) in y_of.iter().enumerate() {
        for &y in ys {
            x_of[y].insert(x);
        }
    }
    Ok(Locators {
        delta,
        y_of,
        x_of,
        row_weight,
    })
}

/// Locators from the dense products directly. Cubic per pair; for oracle use.
pub fn locator_sets_dense(u: &SparseOperator, delta: f64) -> Result<Locators, RigidityError> {
    if !(delta > 0.0) {
        return Err(RigidityError::BadDelta(delta));
    }
    let dense = u.to_dense();
    let (m, n) = dense.shape();
    let phi_one = &dense * dense.adjoint();
    let y_of: Vec<BTreeSet<usize>> = (0..n)
        .into_par_iter()
        .map(|x| {
            let mut e_xx = DMatrix::<Complex64>::zeros(n, n);
            e_xx[(x, x)] = Complex64::new(1.0, 0.0);
            let phi_exx = &dense * e_xx * dense.adjoint();
            (0..m)
                .filter(|&y| {
                    // Φ(e_xx)·e_yy·Φ(1) = (column y of Φ(e_xx)) ⊗ (row y of Φ(1))
                    dense_spectral_norm(&(phi_exx.columns(y, 1) * phi_one.rows(y, 1))) > delta
                })
                .collect()
        })
        .collect();
    let mut x_of = vec![BTreeSet::new(); m];
    for (x, ys) in y_of.iter().enumerate() {
        for &y in ys {
            x_of[y].insert(x);
        }
    }
    let row_weight = (0..m).map(|y| dense.row(y).norm()).collect();
    Ok(Locators {
        delta,
        y_of,
        x_of,
        row_weight,
    })
}

/// Per-point tails outside the `η`-locators.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConcentrationReport {
    pub eta: f64,
    pub eps: f64,
    pub passes: bool,
    /// `(x, ‖(1 - χ_{Y_{x,η}}) Φ(e_xx)‖)` for violators.
    pub source_violations: Vec<(usize, f64)>,
    /// `(y, ‖(1 - χ_{X_{y,η}}) Ψ(e_yy)‖)` for violators.
    pub target_violations: Vec<(usize, f64)>,
    pub max_source_tail: f64,
    pub max_target_tail: f64,
}

/// Checks `‖(1 - χ_{Y_{x,η}}) Φ(e_xx)‖ < ε` for all `x` and
/// `‖(1 - χ_{X_{y,η}}) Ψ(e_yy)‖ < ε` for all `y`. Each norm is a column
/// (resp. row) tail of `U` times the column (resp. row) norm.
pub fn concentration_check(u: &SparseOperator, eta: f64, eps: f64) -> Result<ConcentrationReport, RigidityError> {
    let loc = locator_sets(u, eta)?;
    let col_norms = u.column_norms();
    let mut col_tail = vec![0.0; u.cols()];
    let mut row_tail = vec![0.0; u.rows()];
    for ((y, x), v) in u.iter() {
        if !loc.y_of[x].contains(&y) {
            col_tail[x] += v.norm_sqr();
        }
        if !loc.x_of[y].contains(&x) {
            row_tail[y] += v.norm_sqr();
        }
    }
    let source: Vec<f64> = col_tail.iter().zip(&col_norms).map(|(t, n)| t.sqrt() * n).collect();
    let target: Vec<f64> = row_tail.iter().zip(&loc.row_weight).map(|(t, n)| t.sqrt() * n).collect();
    let source_violations: Vec<(usize, f64)> =
        source.iter().copied().enumerate().filter(|&(_, t)| t >= eps).collect();
    let target_violations: Vec<(usize, f64)> =
        target.iter().copied().enumerate().filter(|&(_, t)| t >= eps).collect();
    Ok(ConcentrationReport {
        eta,
        eps,
        passes: source_violations.is_empty() && target_violations.is_empty(),
        source_violations,
        target_violations,
        max_source_tail: source.iter().copied().fold(0.0, f64::max),
        max_target_tail: target.iter().copied().fold(0.0, f64::max),
    })
}
