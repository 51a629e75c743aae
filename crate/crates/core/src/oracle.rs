//! Brute-force verification path.
//!
//! The squeezing unitary `exp(−i·z/2·Σ (Z_jk b†_j b†_k + Z*_jk b_j b_k))`
//! acts on the operator vector `b = (b_1..b_N, b†_1..b†_N)` by conjugation.
//! With `H` the bracketed generator (times z/2), `[H, b_m] = −z·Σ_k Z_mk b†_k`
//! and `[H, b†_m] = z·Σ_k Z*_mk b_k`, so `d/ds e^{isH} b e^{−isH} = Γ·b` with
//!
//! ```text
//! Γ = [[ 0,      −i·z·Z ],
//!      [ i·z·Z*,  0     ]]
//! ```
//!
//! and the Bogoliubov matrix is `B = exp(Γ)`. The exponential is evaluated by
//! scaling and squaring of a diagonal Padé approximant, which shares no code
//! with the eigendecomposition route used by the closed form.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::graph::{nullifier_map, AdjacencyMatrix, PhaseVector};
use crate::matfun::{singular_values, ComplexMatrix};
use crate::scalar::Real;
use crate::synthesis::{
    covariance_closed_form, interaction_from_cluster, BogoliubovPair, CovarianceReport, Gauge, InteractionMatrix,
    SqueezeScale,
};
use crate::tolerance::Tolerances;

const PADE_ORDER: usize = 8;

/// `G = [[0, 1], [1, 0]]` in `N × N` blocks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SwapForm {
    pub n: usize,
}

impl SwapForm {
    pub fn matrix<T: Real>(&self) -> ComplexMatrix<T> {
        let n = self.n;
        ComplexMatrix::from_fn(2 * n, 2 * n, |i, j| {
            if (i < n && j == i + n) || (i >= n && j + n == i) {
                Complex::new(T::one(), T::zero())
            } else {
                Complex::new(T::zero(), T::zero())
            }
        })
    }
}

/// Matrix exponential by scaling and squaring with a `[8/8]` Padé approximant.
pub fn matrix_exp<T: Real>(m: &ComplexMatrix<T>) -> Result<ComplexMatrix<T>> {
    let n = m.rows();
    let norm = m.one_norm();
    let mut squarings = 0u32;
    if norm > T::lit(0.5) {
        squarings = (norm / T::lit(0.5)).log2().ceil().to_u32().unwrap_or(0);
    }
    let scaled = m.scale_real(T::one() / T::lit(2.0).powi(squarings as i32));

    let mut coeff = T::one();
    let mut power = ComplexMatrix::identity(n);
    let mut numer = ComplexMatrix::identity(n);
    let mut denom = ComplexMatrix::identity(n);
    let q = PADE_ORDER as f64;
    for k in 1..=PADE_ORDER {
        let kf = k as f64;
        coeff *= T::lit((q - kf + 1.0) / (kf * (2.0 * q - kf + 1.0)));
        power = &power * &scaled;
        let term = power.scale_real(coeff);
        numer = &numer + &term;
        denom = if k % 2 == 0 { &denom + &term } else { &denom - &term };
    }
    let mut out = denom.solve(&numer)?;
    for _ in 0..squarings {
        out = &out * &out;
    }
    Ok(out)
}

/// `Γ` for an arbitrary (not necessarily symmetric) interaction matrix.
pub fn squeezing_generator<T: Real>(z_matrix: &ComplexMatrix<T>, z: T) -> ComplexMatrix<T> {
    let n = z_matrix.rows();
    let zero = ComplexMatrix::zeros(n, n);
    let upper = z_matrix.scale(Complex::new(T::zero(), -z));
    let lower = z_matrix.conj().scale(Complex::new(T::zero(), z));
    ComplexMatrix::block2x2(&zero, &upper, &lower, &zero)
}

/// Full `2N × 2N` Bogoliubov matrix `exp(Γ)`.
///
/// Rejects `z·σ_max(Z)` above the overflow cap.
pub fn bogoliubov_matrix_oracle<T: Real>(z_matrix: &ComplexMatrix<T>, z: T, tol: &Tolerances<T>) -> Result<ComplexMatrix<T>> {
    if !(z >= T::zero() && z.is_finite()) {
        return Err(Error::InvalidScale { value: z.as_f64() });
    }
    let sigma_max = singular_values(z_matrix)?.first().copied().unwrap_or_else(T::zero);
    let exponent = z * sigma_max;
    if exponent > tol.exponent_cap {
        return Err(Error::ScaleTooLarge { exponent: exponent.as_f64(), cap: tol.exponent_cap.as_f64() });
    }
    matrix_exp(&squeezing_generator(z_matrix, z))
}

/// Splits a `2N × 2N` Bogoliubov matrix into its upper blocks.
pub fn split_blocks<T: Real>(b: &ComplexMatrix<T>) -> BogoliubovPair<T> {
    let n = b.rows() / 2;
    BogoliubovPair { x: b.submatrix(0, 0, n, n), y: b.submatrix(0, n, n, n) }
}

/// Largest deviation of the lower block row from the conjugate of the upper one.
pub fn conjugation_residual<T: Real>(b: &ComplexMatrix<T>) -> T {
    let n = b.rows() / 2;
    let pair = split_blocks(b);
    let lower = ComplexMatrix::hstack(&pair.y.conj(), &pair.x.conj());
    b.submatrix(n, 0, n, 2 * n).max_diff(&lower)
}

/// `(X, Y)` from the exponential of the squeezing generator.
pub fn bogoliubov_oracle<T: Real>(
    zm: &InteractionMatrix<T>,
    z: SqueezeScale<T>,
    tol: &Tolerances<T>,
) -> Result<BogoliubovPair<T>> {
    Ok(split_blocks(&bogoliubov_matrix_oracle(zm.matrix(), z.value(), tol)?))
}

/// `C = ½·Q·B·G·Bᵀ·Qᵀ` for any square interaction matrix, symmetric or not.
///
/// `E` is read off `Q·B = −[E, E*]`. A non-symmetric `Z` breaks the
/// commutation relations and shows up as a nonzero `imag_residual`.
pub fn covariance_oracle_raw<T: Real>(
    a: &AdjacencyMatrix<T>,
    theta: &PhaseVector<T>,
    z_matrix: &ComplexMatrix<T>,
    z: T,
    tol: &Tolerances<T>,
) -> Result<CovarianceReport<T>> {
    let n = a.n();
    if z_matrix.rows() != n || !z_matrix.is_square() {
        return Err(Error::DimensionMismatch {
            expected: format!("{n}x{n} interaction"),
            found: format!("{}x{}", z_matrix.rows(), z_matrix.cols()),
        });
    }
    let q = nullifier_map(a, theta)?;
    let b = bogoliubov_matrix_oracle(z_matrix, z, tol)?;
    let g = SwapForm { n }.matrix();
    let qb = q.matrix() * &b;
    let raw = (&(&qb * &g) * &qb.transpose()).scale_real(T::lit(0.5));
    let e = -&qb.submatrix(0, 0, n, n);
    Ok(CovarianceReport::from_raw(&raw, e))
}

pub fn covariance_oracle<T: Real>(
    a: &AdjacencyMatrix<T>,
    theta: &PhaseVector<T>,
    zm: &InteractionMatrix<T>,
    z: SqueezeScale<T>,
    tol: &Tolerances<T>,
) -> Result<CovarianceReport<T>> {
    covariance_oracle_raw(a, theta, zm.matrix(), z.value(), tol)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow<T> {
    pub z: T,
    pub max_abs_c: T,
    pub frobenius_c: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepReport<T> {
    pub rows: Vec<SweepRow<T>>,
    /// `(z, ‖C_closed − C_oracle‖_max)` at the first and last sweep point.
    pub oracle_checks: Vec<(T, T)>,
}

impl<T: Real> SweepReport<T> {
    pub fn is_strictly_decreasing(&self) -> bool {
        self.rows.windows(2).all(|w| w[1].max_abs_c < w[0].max_abs_c)
    }
}

/// Closed-form covariance over ascending `z`, with the gauge resolved at
/// every point; the oracle is consulted at the two ends.
pub fn convergence_sweep<T: Real>(
    a: &AdjacencyMatrix<T>,
    theta: &PhaseVector<T>,
    gauge: &Gauge<T>,
    z_values: &[T],
    tol: &Tolerances<T>,
) -> Result<SweepReport<T>> {
    if z_values.is_empty()
        || z_values.iter().any(|&z| !(z > T::zero() && z.is_finite()))
        || z_values.windows(2).any(|w| w[1] <= w[0])
    {
        return Err(Error::InvalidSweep);
    }
    let mut rows = Vec::with_capacity(z_values.len());
    let mut oracle_checks = Vec::new();
    let last = z_values.len() - 1;
    for (k, &zv) in z_values.iter().enumerate() {
        let z = SqueezeScale::new(zv)?;
        let p = gauge.resolve(a, theta, z, tol)?;
        let closed = covariance_closed_form(a, theta, &p, z, tol)?;
        if k == 0 || k == last {
            let zm = interaction_from_cluster(a, theta, &p, tol)?;
            let oracle = covariance_oracle(a, theta, &zm, z, tol)?;
            let residual = closed.c.max_diff(&oracle.c);
            if residual > tol.oracle {
                return Err(Error::OracleMismatch { z: zv.as_f64(), residual: residual.as_f64() });
            }
            if oracle_checks.last().map(|&(z0, _)| z0 != zv).unwrap_or(true) {
                oracle_checks.push((zv, residual));
            }
        }
        rows.push(SweepRow { z: zv, max_abs_c: closed.max_abs, frobenius_c: closed.frobenius });
    }
    Ok(SweepReport { rows, oracle_checks })
}
