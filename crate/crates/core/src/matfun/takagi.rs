//! Autonne–Takagi factorization restricted to symmetric unitary matrices.

use num_complex::Complex;

use super::eigen::hermitian_eigen;
use super::matrix::ComplexMatrix;
use crate::error::{Error, Result};
use crate::scalar::{phase, wrap_angle, Real};
use crate::tolerance::Tolerances;

/// Spectral form `S = Q·e^{iΛ}·Qᵀ` of a symmetric unitary `S`, with `Q` real
/// orthogonal and eigenangles in (−π, π].
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricUnitarySpectrum<T> {
    /// Real orthogonal, stored with zero imaginary part.
    pub basis: ComplexMatrix<T>,
    pub angles: Vec<T>,
}

impl<T: Real> SymmetricUnitarySpectrum<T> {
    /// `Q · diag(f(λ)) · Qᵀ`
    pub fn map(&self, f: impl Fn(T) -> Complex<T>) -> ComplexMatrix<T> {
        let d: Vec<Complex<T>> = self.angles.iter().map(|&a| f(a)).collect();
        &self.basis.mul_diag_right(&d) * &self.basis.transpose()
    }
}

pub(crate) fn check_symmetric_unitary<T: Real>(s: &ComplexMatrix<T>, tol: &Tolerances<T>) -> Result<()> {
    if !s.is_square() {
        return Err(Error::DimensionMismatch {
            expected: "square matrix".into(),
            found: format!("{}x{}", s.rows(), s.cols()),
        });
    }
    if !s.is_unitary(tol.rtol) {
        return Err(Error::NotUnitary { residual: s.unitarity_residual().as_f64() });
    }
    if !s.is_symmetric(tol.rtol) {
        return Err(Error::NotSymmetric { residual: s.symmetry_residual().as_f64() });
    }
    Ok(())
}

/// Jointly diagonalizes the commuting real symmetric matrices `Re S` and `Im S`.
///
/// `Re S` is diagonalized first; inside every cluster of eigenvalues closer
/// than `degenerate_gap·‖S‖_max`, `Im S` restricted to that eigenspace is
/// diagonalized to fix the basis.
pub fn symmetric_unitary_spectrum<T: Real>(
    s: &ComplexMatrix<T>,
    tol: &Tolerances<T>,
) -> Result<SymmetricUnitarySpectrum<T>> {
    check_symmetric_unitary(s, tol)?;
    let n = s.rows();
    let sym = s.symmetrized();
    let re = sym.real_part();
    let im = sym.imag_part();
    let loose = T::lit(1e-6).max(tol.rtol);
    let spec_re = hermitian_eigen(&re, loose)?;
    let mut q = spec_re.eigenvectors;
    let gap = tol.degenerate_gap * sym.max_abs().max(T::one());

    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && spec_re.eigenvalues[end] - spec_re.eigenvalues[end - 1] < gap {
            end += 1;
        }
        if end - start > 1 {
            let idx: Vec<usize> = (start..end).collect();
            let qg = q.select_columns(&idx);
            let restricted = (&(&qg.transpose() * &im) * &qg).real_part().symmetrized();
            let inner = hermitian_eigen(&restricted, loose)?;
            let rotated = &qg * &inner.eigenvectors;
            for (k, &col) in idx.iter().enumerate() {
                for i in 0..n {
                    q[(i, col)] = Complex::new(rotated[(i, k)].re, T::zero());
                }
            }
        }
        start = end;
    }

    let angles = (0..n)
        .map(|j| {
            let col = q.column(j);
            let quad = |m: &ComplexMatrix<T>| {
                let mut acc = T::zero();
                for a in 0..n {
                    for b in 0..n {
                        acc += col[a].re * m[(a, b)].re * col[b].re;
                    }
                }
                acc
            };
            wrap_angle(quad(&im).atan2(quad(&re)))
        })
        .collect();
    Ok(SymmetricUnitarySpectrum { basis: q, angles })
}

/// Returns a unitary `R` with `R·Rᵀ = S` for symmetric unitary `S`.
///
/// `R = Q·e^{iΛ/2}` from the spectral form, principal half-angles.
pub fn takagi_symmetric_unitary<T: Real>(s: &ComplexMatrix<T>, tol: &Tolerances<T>) -> Result<ComplexMatrix<T>> {
    let spec = symmetric_unitary_spectrum(s, tol)?;
    let half: Vec<Complex<T>> = spec.angles.iter().map(|&a| phase(a * T::lit(0.5))).collect();
    Ok(spec.basis.mul_diag_right(&half))
}

/// `Z = V·diag(σ)·Vᵀ` with `V` unitary and `σ` ascending.
#[derive(Debug, Clone, PartialEq)]
pub struct Takagi<T> {
    pub basis: ComplexMatrix<T>,
    pub values: Vec<T>,
}

impl<T: Real> Takagi<T> {
    pub fn reconstruct(&self) -> ComplexMatrix<T> {
        let d: Vec<Complex<T>> = self.values.iter().map(|&s| Complex::new(s, T::zero())).collect();
        &self.basis.mul_diag_right(&d) * &self.basis.transpose()
    }
}

/// Takagi factorization of a nonsingular complex symmetric matrix.
///
/// With `Z = A + i·B`, the real symmetric `[[A, B], [B, −A]]` has eigenvalues
/// `±σ_j`; an eigenvector `(x, y)` for `+σ` gives `Z·v* = σ·v` with
/// `v = x + i·y`, and vectors of one eigenspace stay orthonormal over ℂ.
/// Being an ordinary symmetric eigenproblem, this is backward stable even
/// when singular values are close. Each column is signed so that its first
/// non-negligible entry has positive real part.
pub fn takagi_symmetric<T: Real>(z: &ComplexMatrix<T>, tol: &Tolerances<T>) -> Result<Takagi<T>> {
    if !z.is_square() {
        return Err(Error::DimensionMismatch { expected: "square matrix".into(), found: format!("{}x{}", z.rows(), z.cols()) });
    }
    if !z.is_symmetric(tol.rtol) {
        return Err(Error::NotSymmetric { residual: z.symmetry_residual().as_f64() });
    }
    let n = z.rows();
    let sym = z.symmetrized();
    let (a, b) = (sym.real_part(), sym.imag_part());
    let neg_a = a.scale_real(-T::one());
    let embedded = ComplexMatrix::block2x2(&a, &b, &b, &neg_a);
    let spec = hermitian_eigen(&embedded, tol.rtol)?;
    let values: Vec<T> = spec.eigenvalues[n..].to_vec();
    let (smallest, largest) = (values[0], values[n - 1]);
    if smallest.is_nan() || smallest <= tol.singular * largest {
        return Err(Error::SingularInput { sigma_min: smallest.max(T::zero()).as_f64(), threshold: (tol.singular * largest).as_f64() });
    }
    let cutoff = T::epsilon().sqrt();
    let mut basis = ComplexMatrix::zeros(n, n);
    for j in 0..n {
        let col = n + j;
        let mut v: Vec<Complex<T>> = (0..n).map(|i| Complex::new(spec.eigenvectors[(i, col)].re, spec.eigenvectors[(n + i, col)].re)).collect();
        let norm = v.iter().fold(T::zero(), |s, c| s + c.norm_sqr()).sqrt();
        let lead = v.iter().find(|c| c.norm() > cutoff * norm).copied().unwrap_or(Complex::new(T::one(), T::zero()));
        let sign = if lead.re < T::zero() || (lead.re == T::zero() && lead.im < T::zero()) { -T::one() } else { T::one() };
        for (i, c) in v.iter_mut().enumerate() {
            basis[(i, j)] = *c * (sign / norm);
        }
    }
    Ok(Takagi { basis, values })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::cx;

    fn tol() -> Tolerances<f64> {
        Tolerances::default()
    }

    fn assert_takagi(s: &ComplexMatrix<f64>) -> ComplexMatrix<f64> {
        let r = takagi_symmetric_unitary(s, &tol()).unwrap();
        assert!(r.unitarity_residual() < 1e-13);
        assert!((&r * &r.transpose()).max_diff(s) < 1e-13);
        r
    }

    #[test]
    fn identity() {
        let r = assert_takagi(&ComplexMatrix::identity(2));
        assert!(r.max_diff(&ComplexMatrix::identity(2)) < 1e-15);
    }

    #[test]
    fn scalar_i() {
        let r = assert_takagi(&ComplexMatrix::identity(1).scale(cx(0.0, 1.0)));
        let expected = phase(std::f64::consts::FRAC_PI_4);
        assert!((r[(0, 0)] - expected).norm() < 1e-15);
    }

    #[test]
    fn negative_swap() {
        // Not unique; only the defining residuals are checked.
        assert_takagi(&ComplexMatrix::from_real(2, 2, &[0.0, -1.0, -1.0, 0.0]).unwrap());
    }

    #[test]
    fn angle_pi_takes_positive_branch() {
        let spec = symmetric_unitary_spectrum(&ComplexMatrix::identity(1).scale_real(-1.0), &tol()).unwrap();
        assert_eq!(spec.angles[0], std::f64::consts::PI);
        let r = assert_takagi(&ComplexMatrix::identity(1).scale_real(-1.0));
        assert!((r[(0, 0)] - cx(0.0, 1.0)).norm() < 1e-15);
    }

    #[test]
    fn degenerate_real_part_is_split_by_imaginary_part() {
        // S = diag(i, -i) has Re S = 0 (fully degenerate); rotate by a real orthogonal.
        let (c, s) = (0.6, 0.8);
        let o = ComplexMatrix::from_real(2, 2, &[c, -s, s, c]).unwrap();
        let d = ComplexMatrix::from_diagonal(&[cx(0.0, 1.0), cx(0.0, -1.0)]);
        let sm = &(&o * &d) * &o.transpose();
        assert_takagi(&sm);
    }

    #[test]
    fn rejects_non_unitary() {
        let m = ComplexMatrix::identity(2).scale_real(2.0);
        assert!(matches!(takagi_symmetric_unitary(&m, &tol()), Err(Error::NotUnitary { .. })));
        let u = ComplexMatrix::from_real(2, 2, &[0.0, 1.0, -1.0, 0.0]).unwrap();
        assert!(matches!(takagi_symmetric_unitary(&u, &tol()), Err(Error::NotSymmetric { .. })));
    }

    #[test]
    fn general_takagi_handles_close_singular_values() {
        let (c, s) = (0.6, 0.8);
        let w = ComplexMatrix::new(2, 2, vec![cx(c, 0.0), cx(0.0, s), cx(0.0, s), cx(c, 0.0)]).unwrap();
        let d = ComplexMatrix::from_real_diagonal(&[1.0, 1.0 + 1e-9]);
        let z = &(&w * &d) * &w.transpose();
        let t = takagi_symmetric(&z, &tol()).unwrap();
        assert!(t.basis.unitarity_residual() < 1e-14);
        assert!(t.reconstruct().max_diff(&z) < 1e-14);
        assert!((t.values[1] - t.values[0] - 1e-9).abs() < 1e-14);
    }

    #[test]
    fn general_takagi_of_diagonal() {
        let z = ComplexMatrix::from_diagonal(&[cx(2.0, 0.0), cx(0.0, 3.0)]);
        let t = takagi_symmetric(&z, &tol()).unwrap();
        assert!((t.values[0] - 2.0).abs() < 1e-15 && (t.values[1] - 3.0).abs() < 1e-15);
        assert!(t.reconstruct().max_diff(&z) < 1e-15);
        assert!(matches!(takagi_symmetric(&ComplexMatrix::<f64>::zeros(2, 2), &tol()), Err(Error::SingularInput { .. })));
    }
}
