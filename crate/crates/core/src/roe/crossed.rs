//! Decomposing operators on a group as `a = Σ_g a_g u_g` with diagonal
//! coefficients, where `u_g δ_h = δ_{gh}`.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::operator::SparseOperator;
use crate::coarse::GroupTable;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CrossedError {
    #[error("operator is {rows}x{cols}, group has order {order}")]
    Shape { rows: usize, cols: usize, order: usize },
    #[error("entry (row {row}, col {col}) needs translation by {element}, which is not in S")]
    SupportEscapes { row: usize, col: usize, element: usize },
}

/// Left translation `u_g`.
pub fn translation(group: &GroupTable, g: usize) -> SparseOperator {
    let n = group.order();
    let mut u = SparseOperator::zeros(n, n);
    for h in 0..n {
        u.set(group.mul(g, h), h, num_complex::Complex64::new(1.0, 0.0));
    }
    u
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CrossedDecomposition {
    /// `g ↦ a_g`, diagonal operators.
    pub coefficients: BTreeMap<usize, SparseOperator>,
}

impl CrossedDecomposition {
    /// `Σ_g a_g u_g`.
    pub fn reconstruct(&self, group: &GroupTable) -> SparseOperator {
        let n = group.order();
        self.coefficients
            .iter()
            .fold(SparseOperator::zeros(n, n), |acc, (&g, a_g)| {
                let term = a_g.matmul(&translation(group, g)).expect("square operators");
                acc.add(&term).expect("same shape")
            })
    }
}

/// `a_g = E(a u_g*)` for each `g ∈ S`, after checking that every entry
/// `(y, x)` of `a` has `y·x⁻¹ ∈ S`.
pub fn crossed_decompose(
    a: &SparseOperator,
    group: &GroupTable,
    s: &BTreeSet<usize>,
) -> Result<CrossedDecomposition, CrossedError> {
    let order = group.order();
    if a.rows() != order || a.cols() != order {
        return Err(CrossedError::Shape {
            rows: a.rows(),
            cols: a.cols(),
            order,
        });
    }
    for ((y, x), _) in a.iter() {
        let element = group.mul(y, group.inv(x));
        if !s.contains(&element) {
            return Err(CrossedError::SupportEscapes { row: y, col: x, element });
        }
    }
    let coefficients = s
        .iter()
        .map(|&g| {
            let a_g = a
                .matmul(&translation(group, g).adjoint())
                .expect("square operators")
                .conditional_expectation();
            (g, a_g)
        })
        .collect();
    Ok(CrossedDecomposition { coefficients })
}
