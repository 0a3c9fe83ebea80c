//! For rank-one `b`, `v`, `c`: `‖v‖·‖bvc‖ = ‖bv‖·‖vc‖`.

use super::norm::spectral_norm;
use super::operator::{OperatorError, SparseOperator};

pub const IDENTITY_TOL: f64 = 1e-9;

/// Both sides `(‖v‖·‖bvc‖, ‖bv‖·‖vc‖)`, after checking each input has rank
/// at most one.
pub fn rank_one_norm_sides(
    b: &SparseOperator,
    v: &SparseOperator,
    c: &SparseOperator,
) -> Result<(f64, f64), OperatorError> {
    for op in [b, v, c] {
        op.check_rank_at_most_one(IDENTITY_TOL)?;
    }
    let bv = b.matmul(v)?;
    let vc = v.matmul(c)?;
    let bvc = bv.matmul(c)?;
    Ok((
        spectral_norm(v) * spectral_norm(&bvc),
        spectral_norm(&bv) * spectral_norm(&vc),
    ))
}

pub fn rank_one_norm_identity_check(
    b: &SparseOperator,
    v: &SparseOperator,
    c: &SparseOperator,
) -> Result<bool, OperatorError> {
    let (lhs, rhs) = rank_one_norm_sides(b, v, c)?;
    Ok((lhs - rhs).abs() <= IDENTITY_TOL * lhs.max(rhs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    #[test]
    fn matrix_unit_triple() {
        let e = SparseOperator::matrix_unit(3, 0, 0);
        assert_eq!(rank_one_norm_sides(&e, &e, &e).unwrap(), (1.0, 1.0));
        assert!(rank_one_norm_identity_check(&e, &e, &e).unwrap());
    }

    #[test]
    fn annihilated_product_gives_zero_sides() {
        let b = SparseOperator::matrix_unit(3, 0, 0);
        let v = SparseOperator::matrix_unit(3, 1, 2);
        let c = SparseOperator::matrix_unit(3, 2, 2);
        assert_eq!(rank_one_norm_sides(&b, &v, &c).unwrap(), (0.0, 0.0));
        assert!(rank_one_norm_identity_check(&b, &v, &c).unwrap());
    }

    #[test]
    fn rank_two_input_is_rejected() {
        let id = SparseOperator::identity(2);
        let e = SparseOperator::outer(&[Complex64::new(1.0, 0.0), Complex64::default()], &[Complex64::new(1.0, 0.0), Complex64::default()]);
        assert!(matches!(
            rank_one_norm_identity_check(&e, &id, &e),
            Err(OperatorError::RankAboveOne(0, 1))
        ));
    }
}
