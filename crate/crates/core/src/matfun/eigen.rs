//! Cyclic complex Jacobi eigensolver for Hermitian matrices, and the
//! spectral calculus built on it.

use num_complex::Complex;
use num_traits::Zero;

use super::matrix::ComplexMatrix;
use crate::error::{Error, Result};
use crate::scalar::Real;

const MAX_SWEEPS: usize = 100;

/// Eigenvalues in ascending order with the matching unitary eigenvector matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianSpectrum<T> {
    pub eigenvalues: Vec<T>,
    /// Eigenvectors stored as columns.
    pub eigenvectors: ComplexMatrix<T>,
}

impl<T: Real> HermitianSpectrum<T> {
    /// `Q · diag(f(λ)) · Q†`
    pub fn map_complex(&self, f: impl Fn(T) -> Complex<T>) -> ComplexMatrix<T> {
        let d: Vec<Complex<T>> = self.eigenvalues.iter().map(|&l| f(l)).collect();
        &self.eigenvectors.mul_diag_right(&d) * &self.eigenvectors.adjoint()
    }

    /// Real spectral map; the result is exactly Hermitian.
    pub fn map(&self, f: impl Fn(T) -> T) -> ComplexMatrix<T> {
        self.map_complex(|l| Complex::new(f(l), T::zero())).hermitized()
    }

    pub fn reconstruct(&self) -> ComplexMatrix<T> {
        self.map(|l| l)
    }

    pub fn min_eigenvalue(&self) -> T {
        self.eigenvalues.first().copied().unwrap_or_else(T::zero)
    }

    pub fn max_eigenvalue(&self) -> T {
        self.eigenvalues.last().copied().unwrap_or_else(T::zero)
    }
}

/// Jacobi rotation `G` (acting on columns p, q) that annihilates the
/// off-diagonal entry `apq` of the Hermitian 2×2 block `[[app, apq], [apq*, aqq]]`.
///
/// Returned as `(g_pp, g_pq, g_qp, g_qq)`.
pub(crate) fn jacobi_rotation<T: Real>(
    app: T,
    aqq: T,
    apq: Complex<T>,
) -> (Complex<T>, Complex<T>, Complex<T>, Complex<T>) {
    let r = apq.norm();
    let e = apq / r;
    let theta = (aqq - app) / (r + r);
    let t = if theta >= T::zero() {
        T::one() / (theta + (theta * theta + T::one()).sqrt())
    } else {
        -T::one() / (-theta + (theta * theta + T::one()).sqrt())
    };
    let c = T::one() / (t * t + T::one()).sqrt();
    let s = t * c;
    let ec = e.conj();
    (Complex::new(c, T::zero()), Complex::new(s, T::zero()), ec * (-s), ec * c)
}

fn jacobi<T: Real>(mut a: ComplexMatrix<T>) -> Result<(Vec<T>, ComplexMatrix<T>)> {
    let n = a.rows();
    let mut v = ComplexMatrix::identity(n);
    let scale = a.frobenius();
    if scale == T::zero() {
        return Ok((vec![T::zero(); n], v));
    }
    let eps = T::epsilon();
    let target = (eps * scale) * (eps * scale);
    let mut converged = n < 2;
    for _ in 0..MAX_SWEEPS {
        let mut off = T::zero();
        for p in 0..n {
            for q in (p + 1)..n {
                off += a[(p, q)].norm_sqr();
            }
        }
        if off + off <= target {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                if apq.norm() <= eps * eps * scale {
                    continue;
                }
                let (gpp, gpq, gqp, gqq) = jacobi_rotation(app, aqq, apq);
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = akp * gpp + akq * gqp;
                    a[(k, q)] = akp * gpq + akq * gqq;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = gpp.conj() * apk + gqp.conj() * aqk;
                    a[(q, k)] = gpq.conj() * apk + gqq.conj() * aqk;
                }
                a[(p, q)] = Complex::zero();
                a[(q, p)] = Complex::zero();
                a[(p, p)] = Complex::new(a[(p, p)].re, T::zero());
                a[(q, q)] = Complex::new(a[(q, q)].re, T::zero());
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = vkp * gpp + vkq * gqp;
                    v[(k, q)] = vkp * gpq + vkq * gqq;
                }
            }
        }
    }
    if !converged {
        return Err(Error::NoConvergence { sweeps: MAX_SWEEPS });
    }
    Ok(((0..n).map(|i| a[(i, i)].re).collect(), v))
}

/// Sorts eigenpairs ascending and fixes each eigenvector's phase so that its
/// first non-negligible component is real and positive.
fn canonicalize<T: Real>(values: Vec<T>, vectors: ComplexMatrix<T>) -> HermitianSpectrum<T> {
    let n = values.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| values[i].partial_cmp(&values[j]).unwrap_or(std::cmp::Ordering::Equal));
    let mut q = vectors.select_columns(&order);
    let threshold = T::epsilon().sqrt();
    for j in 0..n {
        let col = q.column(j);
        let peak = col.iter().fold(T::zero(), |m, z| m.max(z.norm()));
        if let Some(lead) = col.iter().find(|z| z.norm() > threshold * peak) {
            let fix = lead.conj() / lead.norm();
            for i in 0..n {
                q[(i, j)] *= fix;
            }
        }
    }
    HermitianSpectrum { eigenvalues: order.iter().map(|&i| values[i]).collect(), eigenvectors: q }
}

/// Eigendecomposition of a Hermitian matrix.
///
/// Fails with `NotHermitian` when `‖M − M†‖_max > tol · max(1, ‖M‖_max)`.
/// Real symmetric input yields real orthogonal eigenvectors.
pub fn hermitian_eigen<T: Real>(m: &ComplexMatrix<T>, tol: T) -> Result<HermitianSpectrum<T>> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch {
            expected: "square matrix".into(),
            found: format!("{}x{}", m.rows(), m.cols()),
        });
    }
    if !m.is_hermitian(tol) {
        return Err(Error::NotHermitian { residual: m.hermitian_residual().as_f64() });
    }
    let (values, vectors) = jacobi(m.hermitized())?;
    Ok(canonicalize(values, vectors))
}

/// Evaluates `f(M) = Q·f(Λ)·Q†` for Hermitian `M` and a real scalar function.
///
/// `f` returning NaN or ±∞ at an eigenvalue is reported as `DomainError`.
pub fn hermitian_apply<T: Real>(m: &ComplexMatrix<T>, f: impl Fn(T) -> T, tol: T) -> Result<ComplexMatrix<T>> {
    let spec = hermitian_eigen(m, tol)?;
    if let Some(&bad) = spec.eigenvalues.iter().find(|&&l| !f(l).is_finite()) {
        return Err(Error::DomainError { eigenvalue: bad.as_f64() });
    }
    Ok(spec.map(f))
}

/// Complex-valued spectral map of a Hermitian matrix (e.g. Cayley transforms).
pub fn hermitian_map<T: Real>(
    m: &ComplexMatrix<T>,
    f: impl Fn(T) -> Complex<T>,
    tol: T,
) -> Result<ComplexMatrix<T>> {
    let spec = hermitian_eigen(m, tol)?;
    if let Some(&bad) = spec.eigenvalues.iter().find(|&&l| {
        let y = f(l);
        !y.re.is_finite() || !y.im.is_finite()
    }) {
        return Err(Error::DomainError { eigenvalue: bad.as_f64() });
    }
    Ok(spec.map_complex(f))
}
