//! Random instances for tests, benchmarks and the acceptance suite.
//!
//! Samples are drawn in `f64` and converted, so the same seed yields the
//! same instance for every scalar type.

use num_complex::Complex;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::blochmessiah::OrthogonalSeed;
use crate::error::Result;
use crate::graph::{check_dims, AdjacencyMatrix, PhaseVector};
use crate::matfun::ComplexMatrix;
use crate::scalar::Real;
use crate::tolerance::Tolerances;

fn normal<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    StandardNormal.sample(rng)
}

/// Symmetric weights uniform in `[−max_weight, max_weight]`, self-loops
/// included; each pair is an edge with probability `density`.
pub fn random_adjacency<T: Real, R: Rng + ?Sized>(rng: &mut R, n: usize, max_weight: f64, density: f64) -> AdjacencyMatrix<T> {
    let mut w = vec![T::zero(); n * n];
    for i in 0..n {
        for j in i..n {
            if rng.random_bool(density.clamp(0.0, 1.0)) {
                let x = T::lit(rng.random_range(-max_weight..=max_weight));
                w[i * n + j] = x;
                w[j * n + i] = x;
            }
        }
    }
    AdjacencyMatrix::new(n, w, T::zero()).expect("symmetric by construction")
}

/// Angles uniform in `(−π, π]`.
pub fn random_phases<T: Real, R: Rng + ?Sized>(rng: &mut R, n: usize) -> PhaseVector<T> {
    let pi = std::f64::consts::PI;
    let angles = (0..n).map(|_| T::lit(rng.random_range(-pi..pi))).collect();
    PhaseVector::new(angles).expect("finite angles")
}

/// Modified Gram-Schmidt, run twice, on the columns of `m`.
fn orthonormalize<T: Real>(mut m: ComplexMatrix<T>) -> ComplexMatrix<T> {
    let n = m.cols();
    for j in 0..n {
        for _ in 0..2 {
            for k in 0..j {
                let dot = (0..m.rows()).fold(Complex::new(T::zero(), T::zero()), |s, i| s + m[(i, k)].conj() * m[(i, j)]);
                for i in 0..m.rows() {
                    let v = m[(i, k)] * dot;
                    m[(i, j)] -= v;
                }
            }
        }
        let norm = (0..m.rows()).fold(T::zero(), |s, i| s + m[(i, j)].norm_sqr()).sqrt();
        for i in 0..m.rows() {
            m[(i, j)] /= norm;
        }
    }
    m
}

/// Haar-distributed real orthogonal matrix.
pub fn random_orthogonal<T: Real, R: Rng + ?Sized>(rng: &mut R, n: usize) -> ComplexMatrix<T> {
    let g = ComplexMatrix::from_fn(n, n, |_, _| Complex::new(T::lit(normal(rng)), T::zero()));
    orthonormalize(g)
}

pub fn random_orthogonal_seed<T: Real, R: Rng + ?Sized>(rng: &mut R, n: usize) -> OrthogonalSeed<T> {
    let o = random_orthogonal::<T, R>(rng, n);
    OrthogonalSeed::new(n, &o.real_parts(), &Tolerances::default()).expect("orthogonal by construction")
}

/// Haar-distributed unitary matrix.
pub fn random_unitary<T: Real, R: Rng + ?Sized>(rng: &mut R, n: usize) -> ComplexMatrix<T> {
    let g = ComplexMatrix::from_fn(n, n, |_, _| Complex::new(T::lit(normal(rng)), T::lit(normal(rng))));
    orthonormalize(g)
}

/// `W·Wᵀ` for a random unitary `W`.
pub fn random_symmetric_unitary<T: Real, R: Rng + ?Sized>(rng: &mut R, n: usize) -> ComplexMatrix<T> {
    let w = random_unitary::<T, R>(rng, n);
    (&w * &w.transpose()).symmetrized()
}

/// Real symmetric positive definite `G·Gᵀ/n + floor·1`.
pub fn random_real_spd<T: Real, R: Rng + ?Sized>(rng: &mut R, n: usize, floor: f64) -> ComplexMatrix<T> {
    let g = ComplexMatrix::from_fn(n, n, |_, _| Complex::new(T::lit(normal(rng)), T::zero()));
    let m = (&g * &g.transpose()).scale_real(T::one() / T::lit(n as f64));
    m.add_diagonal(Complex::new(T::lit(floor), T::zero())).symmetrized()
}

/// `P = e^{−iΘ}·(A + i)⁻¹·M·(A − i)⁻¹·e^{iΘ}` for a random real SPD `M`, which
/// makes the compatibility test matrix equal to `M`.
pub fn random_compatible_gauge<T: Real, R: Rng + ?Sized>(
    rng: &mut R,
    a: &AdjacencyMatrix<T>,
    theta: &PhaseVector<T>,
) -> Result<ComplexMatrix<T>> {
    check_dims(a, theta)?;
    let n = a.n();
    let m = random_real_spd::<T, R>(rng, n, 0.5);
    let plus = a.to_complex().add_diagonal(Complex::new(T::zero(), T::one()));
    let minus = a.to_complex().add_diagonal(Complex::new(T::zero(), -T::one()));
    let left = plus.solve(&m)?;
    let core = minus.transpose().solve(&left.transpose())?.transpose();
    let p = core.mul_diag_left(&theta.exp_i(-T::one())).mul_diag_right(&theta.exp_i(T::one()));
    Ok(p.hermitized())
}

/// Generic complex Hermitian positive definite matrix; fails the
/// compatibility test for any cluster with probability one.
pub fn random_hermitian_pd<T: Real, R: Rng + ?Sized>(rng: &mut R, n: usize) -> ComplexMatrix<T> {
    let g = ComplexMatrix::from_fn(n, n, |_, _| Complex::new(T::lit(normal(rng)), T::lit(normal(rng))));
    let m = (&g * &g.adjoint()).scale_real(T::one() / T::lit(n as f64));
    m.add_diagonal(Complex::new(T::lit(0.5), T::zero())).hermitized()
}
