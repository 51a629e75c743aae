//! One-sided (Hestenes) Jacobi singular value decomposition.
//!
//! Small singular values come out with high relative accuracy, which the
//! nonsingularity and phase-regularity thresholds rely on.

use num_complex::Complex;
use num_traits::Zero;

use super::eigen::jacobi_rotation;
use super::matrix::ComplexMatrix;
use crate::error::{Error, Result};
use crate::scalar::Real;

const MAX_SWEEPS: usize = 80;

/// `M = left · diag(singular_values) · right†`, singular values descending.
#[derive(Debug, Clone, PartialEq)]
pub struct Svd<T> {
    pub left: ComplexMatrix<T>,
    pub singular_values: Vec<T>,
    pub right: ComplexMatrix<T>,
}

impl<T: Real> Svd<T> {
    pub fn sigma_max(&self) -> T {
        self.singular_values.first().copied().unwrap_or_else(T::zero)
    }

    pub fn sigma_min(&self) -> T {
        self.singular_values.last().copied().unwrap_or_else(T::zero)
    }

    pub fn reconstruct(&self) -> ComplexMatrix<T> {
        let d: Vec<Complex<T>> = self.singular_values.iter().map(|&s| Complex::new(s, T::zero())).collect();
        &self.left.mul_diag_right(&d) * &self.right.adjoint()
    }
}

/// Singular value decomposition of a square complex matrix.
pub fn svd<T: Real>(m: &ComplexMatrix<T>) -> Result<Svd<T>> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch {
            expected: "square matrix".into(),
            found: format!("{}x{}", m.rows(), m.cols()),
        });
    }
    let n = m.rows();
    let mut a = m.clone();
    let mut v = ComplexMatrix::identity(n);
    let eps = T::epsilon();
    let mut converged = n < 2;
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                let mut alpha = T::zero();
                let mut beta = T::zero();
                let mut gamma = Complex::zero();
                for k in 0..n {
                    alpha += a[(k, p)].norm_sqr();
                    beta += a[(k, q)].norm_sqr();
                    gamma += a[(k, p)].conj() * a[(k, q)];
                }
                if gamma.norm() <= eps * (alpha * beta).sqrt() || gamma.is_zero() {
                    continue;
                }
                rotated = true;
                let (gpp, gpq, gqp, gqq) = jacobi_rotation(alpha, beta, gamma);
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = akp * gpp + akq * gqp;
                    a[(k, q)] = akp * gpq + akq * gqq;
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = vkp * gpp + vkq * gqp;
                    v[(k, q)] = vkp * gpq + vkq * gqq;
                }
            }
        }
        if !rotated {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::NoConvergence { sweeps: MAX_SWEEPS });
    }

    let norms: Vec<T> = (0..n).map(|j| a.column(j).iter().fold(T::zero(), |s, z| s + z.norm_sqr()).sqrt()).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| norms[j].partial_cmp(&norms[i]).unwrap_or(std::cmp::Ordering::Equal));
    let singular_values: Vec<T> = order.iter().map(|&j| norms[j]).collect();
    let right = v.select_columns(&order);
    let cols = a.select_columns(&order);

    let floor = eps * singular_values.first().copied().unwrap_or_else(T::zero);
    let mut left = ComplexMatrix::zeros(n, n);
    let mut filled = Vec::with_capacity(n);
    for (j, &s) in singular_values.iter().enumerate() {
        if s > floor && s > T::zero() {
            for i in 0..n {
                left[(i, j)] = cols[(i, j)] / s;
            }
            filled.push(j);
        }
    }
    complete_orthonormal(&mut left, &filled);
    Ok(Svd { left, singular_values, right })
}

/// Fills the columns of `q` not listed in `filled` with an orthonormal
/// completion drawn from the standard basis.
fn complete_orthonormal<T: Real>(q: &mut ComplexMatrix<T>, filled: &[usize]) {
    let n = q.rows();
    let mut basis: Vec<usize> = filled.to_vec();
    let mut candidate = 0;
    for j in 0..n {
        if filled.contains(&j) {
            continue;
        }
        while candidate < n {
            let mut col: Vec<Complex<T>> = (0..n).map(|i| if i == candidate { Complex::new(T::one(), T::zero()) } else { Complex::zero() }).collect();
            candidate += 1;
            for _ in 0..2 {
                for &b in &basis {
                    let dot = (0..n).fold(Complex::zero(), |s, i| s + q[(i, b)].conj() * col[i]);
                    for (i, c) in col.iter_mut().enumerate() {
                        *c -= q[(i, b)] * dot;
                    }
                }
            }
            let norm = col.iter().fold(T::zero(), |s, z| s + z.norm_sqr()).sqrt();
            if norm > T::lit(0.5) {
                for (i, c) in col.into_iter().enumerate() {
                    q[(i, j)] = c / norm;
                }
                basis.push(j);
                break;
            }
        }
    }
}

/// Singular values, descending.
pub fn singular_values<T: Real>(m: &ComplexMatrix<T>) -> Result<Vec<T>> {
    Ok(svd(m)?.singular_values)
}

/// Smallest singular value.
pub fn sigma_min<T: Real>(m: &ComplexMatrix<T>) -> Result<T> {
    Ok(svd(m)?.sigma_min())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::cx;

    #[test]
    fn reconstructs_complex_matrix() {
        let m = ComplexMatrix::new(
            3,
            3,
            vec![cx(1.0, 2.0), cx(0.0, -1.0), cx(3.0, 0.0), cx(-2.0, 0.5), cx(1.0, 1.0), cx(0.0, 0.0), cx(0.5, 0.0), cx(0.0, 2.0), cx(-1.0, -1.0)],
        )
        .unwrap();
        let s = svd(&m).unwrap();
        assert!(s.reconstruct().max_diff(&m) < 1e-13);
        assert!(s.left.unitarity_residual() < 1e-13);
        assert!(s.right.unitarity_residual() < 1e-13);
        assert!(s.singular_values.windows(2).all(|w| w[0] >= w[1]));
    }

    #[test]
    fn rank_deficient_matrix_gets_completed_basis() {
        let m = ComplexMatrix::<f64>::from_real(2, 2, &[1.0, 1.0, 1.0, 1.0]).unwrap();
        let s = svd(&m).unwrap();
        assert!((s.sigma_max() - 2.0).abs() < 1e-14);
        assert!(s.sigma_min() < 1e-15);
        assert!(s.left.unitarity_residual() < 1e-13);
        assert!(s.reconstruct().max_diff(&m) < 1e-14);
    }

    #[test]
    fn tiny_singular_value_is_resolved() {
        let m = ComplexMatrix::<f64>::from_real(2, 2, &[1.0, 0.0, 0.0, 1e-13]).unwrap();
        let s = singular_values(&m).unwrap();
        assert!((s[1] - 1e-13).abs() < 1e-25);
    }
}
