//! Finitely supported complex matrices between finite ground sets.
//!
//! Entries are indexed `(row y, col x)` and hold `⟨a δ_x, δ_y⟩`; the support
//! relation uses the `(x, y)` orientation.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::coarse::Relation;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OperatorError {
    #[error("shape mismatch: {op} of {left:?} and {right:?}")]
    Shape {
        op: &'static str,
        left: (usize, usize),
        right: (usize, usize),
    },
    #[error("entry ({row}, {col}) is out of range for a {rows}x{cols} operator")]
    OutOfRange {
        row: usize,
        col: usize,
        rows: usize,
        cols: usize,
    },
    #[error("operator has rank greater than one (columns {0} and {1} are independent)")]
    RankAboveOne(usize, usize),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "OperatorLiteral", into = "OperatorLiteral")]
pub struct SparseOperator {
    rows: usize,
    cols: usize,
    entries: BTreeMap<(usize, usize), Complex64>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct OperatorLiteral {
    rows: usize,
    cols: usize,
    entries: Vec<(usize, usize, f64, f64)>,
}

impl TryFrom<OperatorLiteral> for SparseOperator {
    type Error = OperatorError;
    fn try_from(lit: OperatorLiteral) -> Result<Self, Self::Error> {
        let mut op = SparseOperator::zeros(lit.rows, lit.cols);
        for (y, x, re, im) in lit.entries {
            op.try_set(y, x, Complex64::new(re, im))?;
        }
        Ok(op)
    }
}

impl From<SparseOperator> for OperatorLiteral {
    fn from(op: SparseOperator) -> Self {
        OperatorLiteral {
            rows: op.rows,
            cols: op.cols,
            entries: op
                .entries
                .into_iter()
                .map(|((y, x), v)| (y, x, v.re, v.im))
                .collect(),
        }
    }
}

impl SparseOperator {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            entries: BTreeMap::new(),
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut op = Self::zeros(n, n);
        for i in 0..n {
            op.set(i, i, Complex64::new(1.0, 0.0));
        }
        op
    }

    /// The matrix unit `e_{yx}` sending `δ_x` to `δ_y`.
    pub fn matrix_unit(n: usize, y: usize, x: usize) -> Self {
        let mut op = Self::zeros(n, n);
        op.set(y, x, Complex64::new(1.0, 0.0));
        op
    }

    /// Diagonal operator with the given entries.
    pub fn diagonal(values: &[Complex64]) -> Self {
        let mut op = Self::zeros(values.len(), values.len());
        for (i, &v) in values.iter().enumerate() {
            op.set(i, i, v);
        }
        op
    }

    /// Indicator `χ_A` of a set of indices.
    pub fn indicator(n: usize, set: &[usize]) -> Self {
        let mut op = Self::zeros(n, n);
        for &i in set {
            op.set(i, i, Complex64::new(1.0, 0.0));
        }
        op
    }

    /// `v_E = Σ_{(x, y) ∈ E} e_{yx}`: the 0/1 operator with support `E`.
    pub fn partial_translation(e: &Relation) -> Self {
        let mut op = Self::zeros(e.size(), e.size());
        for (x, y) in e.iter() {
            op.set(y, x, Complex64::new(1.0, 0.0));
        }
        op
    }

    /// Rank-one `ξ η*`.
    pub fn outer(xi: &[Complex64], eta: &[Complex64]) -> Self {
        let mut op = Self::zeros(xi.len(), eta.len());
        for (y, a) in xi.iter().enumerate() {
            for (x, b) in eta.iter().enumerate() {
                op.set(y, x, a * b.conj());
            }
        }
        op
    }

    pub fn from_dense(m: &DMatrix<Complex64>) -> Self {
        let mut op = Self::zeros(m.nrows(), m.ncols());
        for x in 0..m.ncols() {
            for y in 0..m.nrows() {
                op.set(y, x, m[(y, x)]);
            }
        }
        op
    }

    pub fn to_dense(&self) -> DMatrix<Complex64> {
        let mut m = DMatrix::zeros(self.rows, self.cols);
        for (&(y, x), &v) in &self.entries {
            m[(y, x)] = v;
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn get(&self, y: usize, x: usize) -> Complex64 {
        self.entries.get(&(y, x)).copied().unwrap_or_default()
    }

    /// Sets `entry(y, x)`; exact zeros are not stored.
    ///
    /// Panics when out of range; see [`try_set`](Self::try_set).
    pub fn set(&mut self, y: usize, x: usize, v: Complex64) {
        self.try_set(y, x, v).expect("entry index in range");
    }

    pub fn try_set(&mut self, y: usize, x: usize, v: Complex64) -> Result<(), OperatorError> {
        if y >= self.rows || x >= self.cols {
            return Err(OperatorError::OutOfRange {
                row: y,
                col: x,
                rows: self.rows,
                cols: self.cols,
            });
        }
        if v == Complex64::default() {
            self.entries.remove(&(y, x));
        } else {
            self.entries.insert((y, x), v);
        }
        Ok(())
    }

    /// Nonzero entries as `((y, x), value)`, row-major.
    pub fn iter(&self) -> impl Iterator<Item = ((usize, usize), Complex64)> + '_ {
        self.entries.iter().map(|(&k, &v)| (k, v))
    }

    /// `{(x, y) : |entry(y, x)| > eps}`. Requires a square operator.
    pub fn support(&self, eps: f64) -> Relation {
        assert_eq!(self.rows, self.cols, "support relation needs a square operator");
        Relation::from_pairs(
            self.rows,
            self.entries
                .iter()
                .filter(|(_, v)| v.norm() > eps)
                .map(|(&(y, x), _)| (x, y)),
        )
        .expect("entries are in range")
    }

    pub fn adjoint(&self) -> Self {
        Self {
            rows: self.cols,
            cols: self.rows,
            entries: self
                .entries
                .iter()
                .map(|(&(y, x), v)| ((x, y), v.conj()))
                .collect(),
        }
    }

    /// Matrix product `self · other`.
    pub fn matmul(&self, other: &SparseOperator) -> Result<Self, OperatorError> {
        if self.cols != other.rows {
            return Err(OperatorError::Shape {
                op: "product",
                left: self.shape(),
                right: other.shape(),
            });
        }
        let mut other_rows: Vec<Vec<(usize, Complex64)>> = vec![Vec::new(); other.rows];
        for (&(k, x), &v) in &other.entries {
            other_rows[k].push((x, v));
        }
        let mut acc: BTreeMap<(usize, usize), Complex64> = BTreeMap::new();
        for (&(y, k), &a) in &self.entries {
            for &(x, b) in &other_rows[k] {
                *acc.entry((y, x)).or_default() += a * b;
            }
        }
        acc.retain(|_, v| *v != Complex64::default());
        Ok(Self {
            rows: self.rows,
            cols: other.cols,
            entries: acc,
        })
    }

    pub fn add(&self, other: &SparseOperator) -> Result<Self, OperatorError> {
        self.combine(other, 1.0, "sum")
    }

    pub fn sub(&self, other: &SparseOperator) -> Result<Self, OperatorError> {
        self.combine(other, -1.0, "difference")
    }

    fn combine(&self, other: &SparseOperator, sign: f64, op: &'static str) -> Result<Self, OperatorError> {
        if self.shape() != other.shape() {
            return Err(OperatorError::Shape {
                op,
                left: self.shape(),
                right: other.shape(),
            });
        }
        let mut out = self.clone();
        for (&k, &v) in &other.entries {
            let e = out.entries.entry(k).or_default();
            *e += v * sign;
        }
        out.entries.retain(|_, v| *v != Complex64::default());
        Ok(out)
    }

    pub fn scale(&self, s: Complex64) -> Self {
        let mut out = self.clone();
        for v in out.entries.values_mut() {
            *v *= s;
        }
        out.entries.retain(|_, v| *v != Complex64::default());
        out
    }

    /// `a ξ`.
    pub fn apply(&self, xi: &[Complex64]) -> Vec<Complex64> {
        let mut out = vec![Complex64::default(); self.rows];
        for (&(y, x), &v) in &self.entries {
            out[y] += v * xi[x];
        }
        out
    }

    /// `‖a δ_x‖` for every column `x`.
    pub fn column_norms(&self) -> Vec<f64> {
        let mut sq = vec![0.0; self.cols];
        for (&(_, x), v) in &self.entries {
            sq[x] += v.norm_sqr();
        }
        sq.into_iter().map(f64::sqrt).collect()
    }

    /// `‖a* δ_y‖` for every row `y`.
    pub fn row_norms(&self) -> Vec<f64> {
        let mut sq = vec![0.0; self.rows];
        for (&(y, _), v) in &self.entries {
            sq[y] += v.norm_sqr();
        }
        sq.into_iter().map(f64::sqrt).collect()
    }

    /// Columns grouped: `out[x] = [(y, entry(y, x))]`.
    pub fn columns(&self) -> Vec<Vec<(usize, Complex64)>> {
        let mut out = vec![Vec::new(); self.cols];
        for (&(y, x), &v) in &self.entries {
            out[x].push((y, v));
        }
        out
    }

    pub fn max_abs_entry(&self) -> f64 {
        self.entries.values().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Largest entry modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &SparseOperator) -> Result<f64, OperatorError> {
        Ok(self.sub(other)?.max_abs_entry())
    }

    /// Restriction to the given columns, i.e. `a · χ_B`.
    pub fn restrict_columns(&self, cols: &[usize]) -> Self {
        let keep: std::collections::BTreeSet<usize> = cols.iter().copied().collect();
        Self {
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .filter(|(&(_, x), _)| keep.contains(&x))
                .map(|(&k, &v)| (k, v))
                .collect(),
        }
    }

    /// Diagonal part: the conditional expectation onto `ℓ∞`.
    pub fn conditional_expectation(&self) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .filter(|(&(y, x), _)| y == x)
                .map(|(&k, &v)| (k, v))
                .collect(),
        }
    }

    /// `Err` with two independent columns when the rank exceeds one.
    pub fn check_rank_at_most_one(&self, tol: f64) -> Result<(), OperatorError> {
        let cols = self.columns();
        let mut pivot: Option<(usize, Vec<Complex64>)> = None;
        for (x, col) in cols.iter().enumerate() {
            if col.is_empty() {
                continue;
            }
            let mut dense = vec![Complex64::default(); self.rows];
            for &(y, v) in col {
                dense[y] = v;
            }
            match &pivot {
                None => pivot = Some((x, dense)),
                Some((px, p)) => {
                    // |⟨p, c⟩| = ‖p‖‖c‖ iff the columns are parallel
                    let inner: Complex64 = p.iter().zip(&dense).map(|(a, b)| a.conj() * b).sum();
                    let np: f64 = p.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
                    let nc: f64 = dense.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
                    if (np * nc - inner.norm()) > tol * np * nc {
                        return Err(OperatorError::RankAboveOne(*px, x));
                    }
                }
            }
        }
        Ok(())
    }
}
