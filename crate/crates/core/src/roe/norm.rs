//! Operator norms.
//!
//! Only rows and columns that carry entries affect the norm, so operators are
//! first compressed to their occupied block. Blocks up to [`DENSE_LIMIT`] use
//! a dense SVD; larger ones use power iteration on `a* a`.

use std::collections::{BTreeMap, BTreeSet};

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use super::operator::SparseOperator;

pub const DENSE_LIMIT: usize = 512;
const POWER_TOL: f64 = 1e-10;
const POWER_MAX_ITERS: usize = 20_000;

struct Compressed {
    matrix: DMatrix<Complex64>,
    col_index: Vec<usize>,
}

fn compress(a: &SparseOperator) -> Compressed {
    let rows: BTreeSet<usize> = a.iter().map(|((y, _), _)| y).collect();
    let cols: BTreeSet<usize> = a.iter().map(|((_, x), _)| x).collect();
    let row_pos: BTreeMap<usize, usize> = rows.iter().enumerate().map(|(i, &k)| (k, i)).collect();
    let col_pos: BTreeMap<usize, usize> = cols.iter().enumerate().map(|(i, &k)| (k, i)).collect();
    let mut matrix = DMatrix::zeros(row_pos.len(), col_pos.len());
    for ((y, x), v) in a.iter() {
        matrix[(row_pos[&y], col_pos[&x])] = v;
    }
    Compressed {
        matrix,
        col_index: col_pos.keys().copied().collect(),
    }
}

/// Largest singular value of `a`.
pub fn spectral_norm(a: &SparseOperator) -> f64 {
    top_singular(a).0
}

/// Largest singular value together with a unit right singular vector
/// (length `a.cols()`). The vector is zero when `a = 0`.
pub fn top_singular(a: &SparseOperator) -> (f64, Vec<Complex64>) {
    let mut vector = vec![Complex64::default(); a.cols()];
    if a.nnz() == 0 {
        return (0.0, vector);
    }
    let c = compress(a);
    let (sigma, v) = if c.matrix.nrows().max(c.matrix.ncols()) <= DENSE_LIMIT {
        dense_top_singular(&c.matrix)
    } else {
        power_top_singular(a, &c.col_index)
    };
    for (i, &x) in c.col_index.iter().enumerate() {
        vector[x] = v[i];
    }
    (sigma, vector)
}

/// Top singular value and right vector of an explicit matrix, from the
/// Hermitian eigen-decomposition of the smaller Gram matrix. (The complex
/// SVD in nalgebra overestimates on some rank-deficient inputs.)
pub fn dense_top_singular(m: &DMatrix<Complex64>) -> (f64, Vec<Complex64>) {
    assert!(!m.is_empty(), "nonempty matrix");
    let adj = m.adjoint();
    let tall = m.ncols() <= m.nrows();
    let gram = if tall { &adj * m } else { m * &adj };
    let eig = SymmetricEigen::new(gram);
    let (i, &lambda) = eig
        .eigenvalues
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .expect("nonempty matrix");
    let w = eig.eigenvectors.column(i).into_owned();
    let mut v: Vec<Complex64> = if tall { w.iter().copied().collect() } else { (&adj * w).iter().copied().collect() };
    normalize(&mut v);
    debug_assert!(lambda >= -1e-9);
    // |m v| is accurate to full precision, unlike sqrt(lambda).
    let sigma = (m * DVector::from_column_slice(&v)).norm();
    (sigma, v)
}

/// Norm of a dense matrix by a real SVD of its realification
/// `[[Re, -Im], [Im, Re]]`, which has the same singular values (each
/// doubled). Used as a test oracle.
pub fn dense_spectral_norm(m: &DMatrix<Complex64>) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    let (r, c) = m.shape();
    let real = DMatrix::<f64>::from_fn(2 * r, 2 * c, |i, j| {
        let z = m[(i % r, j % c)];
        match (i < r, j < c) {
            (true, true) | (false, false) => z.re,
            (true, false) => -z.im,
            (false, true) => z.im,
        }
    });
    real.singular_values().iter().copied().fold(0.0, f64::max)
}

fn power_top_singular(a: &SparseOperator, cols: &[usize]) -> (f64, Vec<Complex64>) {
    let adj = a.adjoint();
    let mut v = vec![Complex64::default(); a.cols()];
    // Deterministic start with no special alignment.
    for (i, &x) in cols.iter().enumerate() {
        v[x] = Complex64::new(1.0 + (i as f64 * 0.618_033_988_7).fract(), 0.0);
    }
    normalize(&mut v);
    let mut sigma = 0.0;
    for _ in 0..POWER_MAX_ITERS {
        let av = a.apply(&v);
        let next_sigma = l2(&av);
        let mut w = adj.apply(&av);
        if l2(&w) == 0.0 {
            break;
        }
        normalize(&mut w);
        let converged = (next_sigma - sigma).abs() <= POWER_TOL * next_sigma;
        sigma = next_sigma;
        v = w;
        if converged {
            break;
        }
    }
    let sigma = l2(&a.apply(&v)).max(sigma);
    let local = cols.iter().map(|&x| v[x]).collect();
    (sigma, local)
}

pub(crate) fn l2(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

fn normalize(v: &mut [Complex64]) {
    let n = l2(v);
    if n > 0.0 {
        for z in v.iter_mut() {
            *z /= n;
        }
    }
}
