use num_complex::Complex;

use super::matrix::ComplexMatrix;
use super::svd::svd;
use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::tolerance::Tolerances;

/// Polar decomposition `Z = P·U` of a complex symmetric nonsingular matrix.
///
/// Returns `(P, U)` with `P = (Z·Z†)^{1/2}` Hermitian positive definite and
/// `U` unitary. For symmetric `Z` the unitary factor is symmetric as well and
/// `P·U = U·P*`. Built from the SVD `Z = W·Σ·V†` as `P = W·Σ·W†`, `U = W·V†`.
pub fn polar_decompose_symmetric<T: Real>(
    z: &ComplexMatrix<T>,
    tol: &Tolerances<T>,
) -> Result<(ComplexMatrix<T>, ComplexMatrix<T>)> {
    if !z.is_square() {
        return Err(Error::DimensionMismatch {
            expected: "square matrix".into(),
            found: format!("{}x{}", z.rows(), z.cols()),
        });
    }
    if !z.is_symmetric(tol.rtol) {
        return Err(Error::NotSymmetric { residual: z.symmetry_residual().as_f64() });
    }
    let dec = svd(z)?;
    let threshold = tol.singular * dec.sigma_max();
    if dec.sigma_min() < threshold || dec.sigma_max() == T::zero() {
        return Err(Error::SingularInput { sigma_min: dec.sigma_min().as_f64(), threshold: threshold.as_f64() });
    }
    let sigma: Vec<Complex<T>> = dec.singular_values.iter().map(|&s| Complex::new(s, T::zero())).collect();
    let p = (&dec.left.mul_diag_right(&sigma) * &dec.left.adjoint()).hermitized();
    let u = &dec.left * &dec.right.adjoint();
    Ok((p, u))
}
