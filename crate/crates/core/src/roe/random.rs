//! Seeded random operators and vectors.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::operator::SparseOperator;
use crate::coarse::Relation;

/// Independent stream `index` of the generator seeded by `seed`. Results do
/// not depend on the order in which streams are consumed.
pub fn stream_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Standard complex Gaussian: real and imaginary parts `N(0, 1/2)`.
pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

pub fn random_complex_vector<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<Complex64> {
    (0..n).map(|_| complex_gaussian(rng)).collect()
}

/// Gaussian entries on exactly the pairs of `support` (pair `(x, y)` is
/// entry `(y, x)`).
pub fn random_on_support<R: Rng + ?Sized>(support: &Relation, rng: &mut R) -> SparseOperator {
    let mut a = SparseOperator::zeros(support.size(), support.size());
    for (x, y) in support.iter() {
        a.set(y, x, complex_gaussian(rng));
    }
    a
}

/// Haar-like random isometry `ℓ2(cols) → ℓ2(rows)` from the QR factor of a
/// Gaussian matrix. Requires `rows >= cols`.
pub fn random_isometry<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> DMatrix<Complex64> {
    assert!(rows >= cols, "an isometry needs rows >= cols");
    let g = DMatrix::from_fn(rows, cols, |_, _| complex_gaussian(rng));
    g.qr().q()
}

/// Random Hermitian operator supported on the symmetric relation `support`,
/// rescaled to spectral norm `norm`.
pub fn random_hermitian<R: Rng + ?Sized>(support: &Relation, norm: f64, rng: &mut R) -> DMatrix<Complex64> {
    let n = support.size();
    let mut h = DMatrix::<Complex64>::zeros(n, n);
    for (x, y) in support.iter() {
        if x < y {
            let z = complex_gaussian(rng);
            h[(y, x)] = z;
            h[(x, y)] = z.conj();
        } else if x == y {
            h[(x, x)] = Complex64::new(rng.sample::<f64, _>(StandardNormal), 0.0);
        }
    }
    let current = super::norm::dense_spectral_norm(&h);
    if current > 0.0 {
        h.scale_mut(norm / current);
    }
    h
}

/// `exp(i·t·H)` for Hermitian `H` via its eigendecomposition.
pub fn unitary_exponential(h: &DMatrix<Complex64>, t: f64) -> DMatrix<Complex64> {
    let eig = h.clone().symmetric_eigen();
    let phases = DMatrix::from_diagonal(&eig.eigenvalues.map(|l| Complex64::from_polar(1.0, t * l)));
    &eig.eigenvectors * phases * eig.eigenvectors.adjoint()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coarse::band;

    #[test]
    fn streams_are_reproducible_and_distinct() {
        let a: f64 = stream_rng(7, 3).random();
        let b: f64 = stream_rng(7, 3).random();
        let c: f64 = stream_rng(7, 4).random();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn random_isometry_is_isometric() {
        let mut rng = ChaCha8Rng::seed_from_u64(51);
        let u = random_isometry(9, 5, &mut rng);
        let err = (u.adjoint() * &u - DMatrix::identity(5, 5)).norm();
        assert!(err < 1e-12);
    }

    #[test]
    fn exponential_of_hermitian_is_unitary() {
        let mut rng = ChaCha8Rng::seed_from_u64(52);
        let h = random_hermitian(&band(20, 1), 1.0, &mut rng);
        assert!((super::super::norm::dense_spectral_norm(&h) - 1.0).abs() < 1e-12);
        assert!((h.adjoint() - &h).norm() < 1e-15);
        let u = unitary_exponential(&h, 0.1);
        assert!((u.adjoint() * &u - DMatrix::identity(20, 20)).norm() < 1e-12);
    }
}
