//! Forward direction: from a cluster `(A, Θ)` and a gauge `P` to the
//! interaction matrix `Z = P·U`, its Bogoliubov blocks and the closed-form
//! nullifier covariance.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::graph::{check_dims, shifted_rotated, AdjacencyMatrix, PhaseVector};
use crate::matfun::{hermitian_apply, hermitian_eigen, hermitian_map, polar_decompose_symmetric, ComplexMatrix};
use crate::scalar::Real;
use crate::tolerance::Tolerances;

/// Overall squeezing parameter `z`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct SqueezeScale<T>(T);

impl<T: Real> SqueezeScale<T> {
    /// Positive, finite `z`.
    pub fn new(z: T) -> Result<Self> {
        if !(z.is_finite() && z > T::zero()) {
            return Err(Error::InvalidScale { value: z.as_f64() });
        }
        Ok(Self(z))
    }

    /// `z = 0`: the identity transformation. Only the Bogoliubov and oracle
    /// paths accept it.
    pub fn boundary() -> Self {
        Self(T::zero())
    }

    pub fn value(self) -> T {
        self.0
    }

    pub(crate) fn require_positive(self) -> Result<T> {
        if self.0 > T::zero() {
            Ok(self.0)
        } else {
            Err(Error::InvalidScale { value: self.0.as_f64() })
        }
    }
}

/// Complex symmetric nonsingular `Z` together with its polar factors `Z = P·U`.
#[derive(Debug, Clone, PartialEq)]
pub struct InteractionMatrix<T> {
    z: ComplexMatrix<T>,
    p: ComplexMatrix<T>,
    u: ComplexMatrix<T>,
}

impl<T: Real> InteractionMatrix<T> {
    /// Polar-decomposes a symmetric nonsingular matrix.
    pub fn from_matrix(z: ComplexMatrix<T>, tol: &Tolerances<T>) -> Result<Self> {
        let (p, u) = polar_decompose_symmetric(&z, tol)?;
        Ok(Self { z, p, u })
    }

    /// Assembles `Z = P·U` from given factors, keeping them verbatim.
    pub fn from_factors(p: ComplexMatrix<T>, u: ComplexMatrix<T>, tol: &Tolerances<T>) -> Result<Self> {
        let spec = hermitian_eigen(&p, tol.rtol)?;
        if spec.min_eigenvalue() <= T::zero() {
            return Err(Error::NotPositiveDefinite { min_eigenvalue: spec.min_eigenvalue().as_f64() });
        }
        if !u.is_unitary(tol.rtol) {
            return Err(Error::NotUnitary { residual: u.unitarity_residual().as_f64() });
        }
        if !u.is_symmetric(tol.rtol) {
            return Err(Error::NotSymmetric { residual: u.symmetry_residual().as_f64() });
        }
        let z = &p * &u;
        if !z.is_symmetric(tol.rtol) {
            return Err(Error::NotSymmetric { residual: z.symmetry_residual().as_f64() });
        }
        Ok(Self { z, p, u })
    }

    pub fn n(&self) -> usize {
        self.z.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix<T> {
        &self.z
    }

    /// Hermitian positive definite factor.
    pub fn p(&self) -> &ComplexMatrix<T> {
        &self.p
    }

    /// Symmetric unitary factor.
    pub fn u(&self) -> &ComplexMatrix<T> {
        &self.u
    }

    /// Largest eigenvalue of `P` (the largest singular value of `Z`).
    pub fn lambda_max(&self, tol: &Tolerances<T>) -> Result<T> {
        Ok(hermitian_eigen(&self.p, tol.rtol)?.max_eigenvalue())
    }
}

/// Blocks `X`, `Y` of the Bogoliubov matrix `[[X, Y], [Y*, X*]]`.
#[derive(Debug, Clone, PartialEq)]
pub struct BogoliubovPair<T> {
    pub x: ComplexMatrix<T>,
    pub y: ComplexMatrix<T>,
}

impl<T: Real> BogoliubovPair<T> {
    /// `‖X·X† − Y·Y† − 1‖_max`
    pub fn normalization_residual(&self) -> T {
        let xx = &self.x * &self.x.adjoint();
        let yy = &self.y * &self.y.adjoint();
        (&xx - &yy).max_diff(&ComplexMatrix::identity(self.x.rows()))
    }

    /// `‖X·Yᵀ − Y·Xᵀ‖_max`
    pub fn symmetry_residual(&self) -> T {
        let xy = &self.x * &self.y.transpose();
        let yx = &self.y * &self.x.transpose();
        xy.max_diff(&yx)
    }

    /// Larger of the two commutation-relation residuals, divided by
    /// `max(1, ‖X‖_max²)` since both products grow like `cosh²(zλ)`.
    pub fn residual(&self) -> T {
        let scale = self.x.max_abs().powi(2).max(T::one());
        self.normalization_residual().max(self.symmetry_residual()) / scale
    }

    /// The full `2N × 2N` matrix.
    pub fn full_matrix(&self) -> ComplexMatrix<T> {
        ComplexMatrix::block2x2(&self.x, &self.y, &self.y.conj(), &self.x.conj())
    }

    pub fn max_diff(&self, other: &Self) -> T {
        self.x.max_diff(&other.x).max(self.y.max_diff(&other.y))
    }
}

/// Nullifier covariance `C` with its factor `E` (`C = E·E†`) and diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct CovarianceReport<T> {
    /// Real symmetric covariance, stored with zero imaginary part.
    pub c: ComplexMatrix<T>,
    pub e: ComplexMatrix<T>,
    pub max_abs: T,
    pub frobenius: T,
    /// Largest imaginary entry of the raw covariance product and of `E·E†`.
    pub imag_residual: T,
    /// `‖C_raw − C_rawᵀ‖_max` before symmetrization.
    pub asymmetry_residual: T,
    /// `‖C − E·E†‖_max`
    pub factor_residual: T,
}

impl<T: Real> CovarianceReport<T> {
    pub(crate) fn from_raw(raw: &ComplexMatrix<T>, e: ComplexMatrix<T>) -> Self {
        let ee = &e * &e.adjoint();
        let imag_residual = raw.max_imag().max(ee.max_imag());
        let asymmetry_residual = raw.symmetry_residual();
        let c = raw.real_part().symmetrized();
        let factor_residual = c.max_diff(&ee);
        Self { max_abs: c.max_abs(), frobenius: c.frobenius(), c, e, imag_residual, asymmetry_residual, factor_residual }
    }

    /// Smallest eigenvalue of the symmetrized covariance.
    pub fn min_eigenvalue(&self) -> Result<T> {
        Ok(hermitian_eigen(&self.c, T::lit(1e-6))?.min_eigenvalue())
    }
}

/// Free positive definite factor at fixed cluster.
#[derive(Debug, Clone, PartialEq)]
pub enum Gauge<T> {
    /// `P = 1`: equal single-mode squeezers.
    Identity,
    /// `P = 1 + e^{−iΘ}·ln(A² + 1)/(2z)·e^{iΘ}`: diagonal nullifier covariance.
    Faithful,
    /// User-supplied `P`, checked against the compatibility condition.
    Custom(ComplexMatrix<T>),
}

impl<T: Real> Gauge<T> {
    pub fn resolve(
        &self,
        a: &AdjacencyMatrix<T>,
        theta: &PhaseVector<T>,
        z: SqueezeScale<T>,
        tol: &Tolerances<T>,
    ) -> Result<ComplexMatrix<T>> {
        match self {
            Gauge::Identity => Ok(gauge_identity(a.n())),
            Gauge::Faithful => gauge_faithful(a, theta, z, tol),
            Gauge::Custom(p) => {
                if p.rows() != a.n() || !p.is_square() {
                    return Err(Error::DimensionMismatch {
                        expected: format!("{n}x{n} gauge", n = a.n()),
                        found: format!("{}x{}", p.rows(), p.cols()),
                    });
                }
                Ok(p.clone())
            }
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Gauge::Identity => "identity",
            Gauge::Faithful => "faithful",
            Gauge::Custom(_) => "custom",
        }
    }
}

/// Outcome of the gauge compatibility test.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaugeCheck<T> {
    pub compatible: bool,
    /// `max|Im M| / max|M|` for `M = (A+i)·e^{iΘ}·P·e^{−iΘ}·(A−i)`.
    pub residual: T,
    /// `‖P·U − (P·U)ᵀ‖_max / ‖P·U‖_max` with `U` from the adjacency matrix.
    pub pu_symmetry_residual: T,
}

/// Strength of one single-mode squeezer.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SqueezerMode<T> {
    /// Eigenvalue of `P`.
    pub lambda: T,
    /// `cosh(z·λ)`
    pub mu: T,
    /// `sinh(z·λ)`
    pub nu: T,
    /// `20·z·λ / ln 10`
    pub decibels: T,
}

/// `U = −i·e^{−iΘ}·(A − i·1)(A + i·1)⁻¹·e^{−iΘ}`, symmetric unitary.
pub fn unitary_from_adjacency<T: Real>(
    a: &AdjacencyMatrix<T>,
    theta: &PhaseVector<T>,
    tol: &Tolerances<T>,
) -> Result<ComplexMatrix<T>> {
    check_dims(a, theta)?;
    let minus_i = Complex::new(T::zero(), -T::one());
    let cayley = hermitian_map(
        &a.to_complex(),
        |l| minus_i * Complex::new(l, -T::one()) / Complex::new(l, T::one()),
        tol.rtol,
    )?;
    let rot = theta.exp_i(-T::one());
    Ok(cayley.mul_diag_left(&rot).mul_diag_right(&rot).symmetrized())
}

pub fn gauge_identity<T: Real>(n: usize) -> ComplexMatrix<T> {
    ComplexMatrix::identity(n)
}

/// `P = 1 + e^{−iΘ}·ln(A² + 1)/(2z)·e^{iΘ}`
pub fn gauge_faithful<T: Real>(
    a: &AdjacencyMatrix<T>,
    theta: &PhaseVector<T>,
    z: SqueezeScale<T>,
    tol: &Tolerances<T>,
) -> Result<ComplexMatrix<T>> {
    check_dims(a, theta)?;
    let z = z.require_positive()?;
    let two_z = z + z;
    let log = hermitian_apply(&a.to_complex(), |l| (l * l).ln_1p() / two_z, tol.rtol)?;
    let p = log.mul_diag_left(&theta.exp_i(-T::one())).mul_diag_right(&theta.exp_i(T::one()));
    Ok(p.add_diagonal(Complex::new(T::one(), T::zero())).hermitized())
}

/// Checks that `(A + i)·e^{iΘ}·P·e^{−iΘ}·(A − i)` is real, i.e. that `P·U` is symmetric.
pub fn validate_gauge<T: Real>(
    a: &AdjacencyMatrix<T>,
    theta: &PhaseVector<T>,
    p: &ComplexMatrix<T>,
    tol: &Tolerances<T>,
) -> Result<GaugeCheck<T>> {
    check_dims(a, theta)?;
    if p.rows() != a.n() || !p.is_square() {
        return Err(Error::DimensionMismatch {
            expected: format!("{n}x{n} gauge", n = a.n()),
            found: format!("{}x{}", p.rows(), p.cols()),
        });
    }
    let spec = hermitian_eigen(p, tol.rtol)?;
    if spec.min_eigenvalue() <= T::zero() {
        return Err(Error::NotPositiveDefinite { min_eigenvalue: spec.min_eigenvalue().as_f64() });
    }
    let left = shifted_rotated(a, theta, T::one());
    let right = shifted_rotated(a, theta, -T::one()).transpose();
    let test = &(&left * p) * &right;
    let residual = test.max_imag() / test.max_abs();

    let pu = p * &unitary_from_adjacency(a, theta, tol)?;
    let pu_symmetry_residual = pu.symmetry_residual() / pu.max_abs();
    Ok(GaugeCheck { compatible: residual <= tol.rtol, residual, pu_symmetry_residual })
}

/// `Z = P·U` with `U` from the adjacency matrix; requires a compatible gauge.
pub fn interaction_from_cluster<T: Real>(
    a: &AdjacencyMatrix<T>,
    theta: &PhaseVector<T>,
    p: &ComplexMatrix<T>,
    tol: &Tolerances<T>,
) -> Result<InteractionMatrix<T>> {
    let check = validate_gauge(a, theta, p, tol)?;
    if !check.compatible {
        return Err(Error::GaugeIncompatible { residual: check.residual.as_f64() });
    }
    let u = unitary_from_adjacency(a, theta, tol)?;
    let z = p * &u;
    Ok(InteractionMatrix { z, p: p.clone(), u })
}

/// `X = cosh(z·P)`, `Y = −i·sinh(z·P)·U`.
pub fn bogoliubov_from_interaction<T: Real>(
    zm: &InteractionMatrix<T>,
    z: SqueezeScale<T>,
    tol: &Tolerances<T>,
) -> Result<BogoliubovPair<T>> {
    let z = z.value();
    let spec = hermitian_eigen(zm.p(), tol.rtol)?;
    let x = spec.map(|l| (z * l).cosh());
    let sinh = spec.map(|l| (z * l).sinh());
    let y = (&sinh * zm.u()).scale(Complex::new(T::zero(), -T::one()));
    Ok(BogoliubovPair { x, y })
}

/// `C = (A + i)·e^{iΘ}·e^{−2zP}·e^{−iΘ}·(A − i)` with `E = (A + i)·e^{iΘ}·e^{−zP}`.
pub fn covariance_closed_form<T: Real>(
    a: &AdjacencyMatrix<T>,
    theta: &PhaseVector<T>,
    p: &ComplexMatrix<T>,
    z: SqueezeScale<T>,
    tol: &Tolerances<T>,
) -> Result<CovarianceReport<T>> {
    let z = z.require_positive()?;
    let check = validate_gauge(a, theta, p, tol)?;
    if !check.compatible {
        return Err(Error::GaugeIncompatible { residual: check.residual.as_f64() });
    }
    closed_form_unchecked(a, theta, p, z, tol)
}

/// Closed form without the gauge check; the imaginary residual in the
/// report still exposes an incompatible `P`.
pub(crate) fn closed_form_unchecked<T: Real>(
    a: &AdjacencyMatrix<T>,
    theta: &PhaseVector<T>,
    p: &ComplexMatrix<T>,
    z: T,
    tol: &Tolerances<T>,
) -> Result<CovarianceReport<T>> {
    let spec = hermitian_eigen(p, tol.rtol)?;
    let decay = spec.map(|l| (-z * l).exp());
    let decay2 = spec.map(|l| (-(z + z) * l).exp());
    let left = shifted_rotated(a, theta, T::one());
    let right = shifted_rotated(a, theta, -T::one()).transpose();
    let raw = &(&left * &decay2) * &right;
    let e = &left * &decay;
    Ok(CovarianceReport::from_raw(&raw, e))
}

/// Eigenvalues `λ_j` of `P` (ascending) and the single-mode squeezing they imply.
pub fn squeezer_spectrum<T: Real>(
    zm: &InteractionMatrix<T>,
    z: SqueezeScale<T>,
    tol: &Tolerances<T>,
) -> Result<Vec<SqueezerMode<T>>> {
    let z = z.value();
    let spec = hermitian_eigen(zm.p(), tol.rtol)?;
    let to_db = T::lit(20.0) / T::LN_10();
    Ok(spec
        .eigenvalues
        .iter()
        .map(|&lambda| SqueezerMode {
            lambda,
            mu: (z * lambda).cosh(),
            nu: (z * lambda).sinh(),
            decibels: to_db * z * lambda,
        })
        .collect())
}
