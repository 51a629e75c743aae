//! Reduction of a multi-mode squeezer to single-mode squeezers between two
//! interferometers, `X = V·cosh(zD)·W†`, `Y = V·sinh(zD)·Wᵀ`, and the
//! cluster condition on the interferometer `V`.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::graph::{check_dims, shifted_rotated, AdjacencyMatrix, PhaseVector};
use crate::matfun::{hermitian_apply, hermitian_map, takagi_symmetric, takagi_symmetric_unitary, ComplexMatrix};
use crate::scalar::{phase, Real};
use crate::synthesis::{BogoliubovPair, InteractionMatrix, SqueezeScale};
use crate::tolerance::Tolerances;

/// Factors of the Bloch-Messiah form of `Z = P·U` at scale `z`.
#[derive(Debug, Clone, PartialEq)]
pub struct BlochMessiahFactors<T> {
    pub v: ComplexMatrix<T>,
    pub w: ComplexMatrix<T>,
    /// Eigenvalues `λ` of `P`, ascending; squeezer `j` has strength `z·λ_j`.
    pub d: Vec<T>,
    pub z: T,
    /// Balancing unitary with `R·Rᵀ = −i·T·U·Tᵀ`, block diagonal over equal `λ`.
    pub r: ComplexMatrix<T>,
    /// `P = T†·diag(λ)·T`
    pub t: ComplexMatrix<T>,
}

impl<T: Real> BlochMessiahFactors<T> {
    /// `z·λ_j`
    pub fn squeezing(&self) -> Vec<T> {
        self.d.iter().map(|&l| self.z * l).collect()
    }

    /// `20·z·λ_j / ln 10`
    pub fn decibels(&self) -> Vec<T> {
        let to_db = T::lit(20.0) / T::LN_10();
        self.squeezing().into_iter().map(|s| to_db * s).collect()
    }

    /// `cosh(zD)`
    pub fn dx(&self) -> Vec<T> {
        self.squeezing().into_iter().map(|s| s.cosh()).collect()
    }

    /// `sinh(zD)`
    pub fn dy(&self) -> Vec<T> {
        self.squeezing().into_iter().map(|s| s.sinh()).collect()
    }

    /// `(V·cosh(zD)·W†, V·sinh(zD)·Wᵀ)`
    pub fn reconstruct(&self) -> BogoliubovPair<T> {
        let real = |v: Vec<T>| -> Vec<Complex<T>> { v.into_iter().map(|x| Complex::new(x, T::zero())).collect() };
        let x = &self.v.mul_diag_right(&real(self.dx())) * &self.w.adjoint();
        let y = &self.v.mul_diag_right(&real(self.dy())) * &self.w.transpose();
        BogoliubovPair { x, y }
    }

    /// `‖U − i·V·Vᵀ‖_max`
    pub fn interferometer_residual(&self, u: &ComplexMatrix<T>) -> T {
        unitary_from_interferometer(&self.v).max_diff(u)
    }
}

/// Real orthogonal `O` parametrizing the interferometers that realize a cluster.
#[derive(Debug, Clone, PartialEq)]
pub struct OrthogonalSeed<T> {
    o: ComplexMatrix<T>,
}

impl<T: Real> OrthogonalSeed<T> {
    /// Rejects `O` with `‖O·Oᵀ − 1‖_max` above `input_symmetry`.
    pub fn new(n: usize, entries: &[T], tol: &Tolerances<T>) -> Result<Self> {
        let o = ComplexMatrix::from_real(n, n, entries)?;
        let residual = o.unitarity_residual();
        if residual > tol.input_symmetry {
            return Err(Error::NotOrthogonal { residual: residual.as_f64() });
        }
        Ok(Self { o })
    }

    pub fn identity(n: usize) -> Self {
        Self { o: ComplexMatrix::identity(n) }
    }

    pub fn n(&self) -> usize {
        self.o.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix<T> {
        &self.o
    }
}

/// Groups of consecutive ascending eigenvalues closer than `gap`.
fn degenerate_groups<T: Real>(values: &[T], gap: T) -> Vec<std::ops::Range<usize>> {
    let mut groups = Vec::new();
    let mut start = 0;
    while start < values.len() {
        let mut end = start + 1;
        while end < values.len() && values[end] - values[end - 1] < gap {
            end += 1;
        }
        groups.push(start..end);
        start = end;
    }
    groups
}

/// Bloch-Messiah factors of `Z = P·U`.
///
/// `T` diagonalizes `P`; `−i·T·U·Tᵀ` commutes with `diag(λ)`, so its Takagi
/// factor `R` is taken block by block over groups of equal `λ`. Then
/// `V = T†·R` and `W = −i·U·Tᵀ·R*`.
///
/// `T` is read off the Takagi factorization `Z = V₀·Σ·V₀ᵀ` as
/// `T = e^{iπ/4}·V₀†`, which diagonalizes `P = V₀·Σ·V₀†`. Taking it from an
/// eigensolver on `P` alone would leave it accurate only to `ε/gap` inside
/// clusters of close but distinct `λ`, and the dropped off-block part of
/// `−i·T·U·Tᵀ` would then spoil the reconstruction.
pub fn bloch_messiah<T: Real>(
    zm: &InteractionMatrix<T>,
    z: SqueezeScale<T>,
    tol: &Tolerances<T>,
) -> Result<BlochMessiahFactors<T>> {
    let z = z.require_positive()?;
    let n = zm.n();
    let takagi = takagi_symmetric(&zm.matrix().symmetrized(), tol)?;
    let t = takagi.basis.adjoint().scale(phase(T::FRAC_PI_4()));
    let minus_i = Complex::new(T::zero(), -T::one());
    let s = (&(&t * zm.u()) * &t.transpose()).scale(minus_i).symmetrized();

    let scale = takagi.values.iter().fold(T::one(), |m, l| m.max(l.abs()));
    let mut r = ComplexMatrix::zeros(n, n);
    for group in degenerate_groups(&takagi.values, tol.degenerate_gap * scale) {
        let len = group.len();
        let block = s.submatrix(group.start, group.start, len, len);
        let rb = takagi_symmetric_unitary(&block, tol)?;
        for i in 0..len {
            for j in 0..len {
                r[(group.start + i, group.start + j)] = rb[(i, j)];
            }
        }
    }

    let v = &t.adjoint() * &r;
    let w = (&(zm.u() * &t.transpose()) * &r.conj()).scale(minus_i);
    Ok(BlochMessiahFactors { v, w, d: takagi.values, z, r, t })
}

/// `V = e^{−iΘ}·(1 + i·A)·(1 + A²)^{−1/2}·O`
pub fn canonical_cluster_interferometer<T: Real>(
    a: &AdjacencyMatrix<T>,
    theta: &PhaseVector<T>,
    o: &OrthogonalSeed<T>,
    tol: &Tolerances<T>,
) -> Result<ComplexMatrix<T>> {
    check_dims(a, theta)?;
    if o.n() != a.n() {
        return Err(Error::DimensionMismatch { expected: format!("{n}x{n} seed", n = a.n()), found: format!("{n}x{n}", n = o.n()) });
    }
    let core = hermitian_map(
        &a.to_complex(),
        |l| Complex::new(T::one(), l) / (T::one() + l * l).sqrt(),
        tol.rtol,
    )?;
    Ok(&core.mul_diag_left(&theta.exp_i(-T::one())) * o.matrix())
}

/// `‖(A + i)·e^{iΘ}·V + (A − i)·e^{−iΘ}·V*‖_max`
///
/// Zero exactly when `i·V·Vᵀ` is the unitary of the cluster `(A, Θ)`.
pub fn cluster_condition_residual<T: Real>(
    v: &ComplexMatrix<T>,
    a: &AdjacencyMatrix<T>,
    theta: &PhaseVector<T>,
) -> Result<T> {
    check_dims(a, theta)?;
    if v.rows() != a.n() || !v.is_square() {
        return Err(Error::DimensionMismatch { expected: format!("{n}x{n}", n = a.n()), found: format!("{}x{}", v.rows(), v.cols()) });
    }
    let lhs = &(&shifted_rotated(a, theta, T::one()) * v) + &(&shifted_rotated(a, theta, -T::one()) * &v.conj());
    Ok(lhs.max_abs())
}

/// Residuals of the real-form cluster conditions on `V_r + i·V_i = e^{iΘ}·V`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RealFormResiduals<T> {
    /// `‖V_i − A·V_r‖_max`
    pub imaginary: T,
    /// `‖V_r·V_rᵀ − (1 + A²)⁻¹‖_max`
    pub gram: T,
}

pub fn real_form_conditions<T: Real>(
    v: &ComplexMatrix<T>,
    a: &AdjacencyMatrix<T>,
    theta: &PhaseVector<T>,
    tol: &Tolerances<T>,
) -> Result<RealFormResiduals<T>> {
    check_dims(a, theta)?;
    let rotated = v.mul_diag_left(&theta.exp_i(T::one()));
    let vr = rotated.real_part();
    let vi = rotated.imag_part();
    let am = a.to_complex();
    let imaginary = vi.max_diff(&(&am * &vr));
    let inv = hermitian_apply(&am, |l| T::one() / (T::one() + l * l), tol.rtol)?;
    let gram = (&vr * &vr.transpose()).max_diff(&inv);
    Ok(RealFormResiduals { imaginary, gram })
}

/// `U = i·V·Vᵀ`
pub fn unitary_from_interferometer<T: Real>(v: &ComplexMatrix<T>) -> ComplexMatrix<T> {
    (v * &v.transpose()).scale(Complex::new(T::zero(), T::one())).symmetrized()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::cx;
    use crate::synthesis::{bogoliubov_from_interaction, gauge_identity, interaction_from_cluster, unitary_from_adjacency};
    use std::f64::consts::{FRAC_1_SQRT_2, PI};

    fn tol() -> Tolerances<f64> {
        Tolerances::default()
    }

    fn epr() -> AdjacencyMatrix<f64> {
        AdjacencyMatrix::new(2, vec![0.0, 1.0, 1.0, 0.0], 0.0).unwrap()
    }

    fn check_factors(zm: &InteractionMatrix<f64>, z: f64) -> BlochMessiahFactors<f64> {
        let scale = SqueezeScale::new(z).unwrap();
        let f = bloch_messiah(zm, scale, &tol()).unwrap();
        let direct = bogoliubov_from_interaction(zm, scale, &tol()).unwrap();
        assert!(f.reconstruct().max_diff(&direct) < 1e-12);
        assert!(f.v.unitarity_residual() < 1e-12 && f.w.unitarity_residual() < 1e-12);
        assert!(f.interferometer_residual(zm.u()) < 1e-12);
        f
    }

    #[test]
    fn degenerate_identity_interaction() {
        let zm = InteractionMatrix::from_matrix(ComplexMatrix::identity(2).scale(cx(0.0, 1.0)), &tol()).unwrap();
        let f = check_factors(&zm, 1.0);
        assert!(f.d.iter().all(|&l| (l - 1.0).abs() < 1e-14));
    }

    #[test]
    fn epr_interaction() {
        let zm = InteractionMatrix::from_matrix(ComplexMatrix::from_real(2, 2, &[0.0, -1.0, -1.0, 0.0]).unwrap(), &tol()).unwrap();
        let f = check_factors(&zm, 1.0);
        assert!(f.d.iter().all(|&l| (l - 1.0).abs() < 1e-14));
        for db in f.decibels() {
            assert!((db - 8.685889638065035).abs() < 1e-12);
        }
        assert!(cluster_condition_residual(&f.v, &epr(), &PhaseVector::zeros(2)).unwrap() < 1e-12);
    }

    #[test]
    fn diagonal_interaction() {
        let zm = InteractionMatrix::from_matrix(ComplexMatrix::from_diagonal(&[cx(2.0, 0.0), cx(0.0, 3.0)]), &tol()).unwrap();
        let f = check_factors(&zm, 0.7);
        assert!((f.d[0] - 2.0).abs() < 1e-14 && (f.d[1] - 3.0).abs() < 1e-14);
        let x = f.reconstruct().x;
        assert!((x[(0, 0)] - cx(1.4f64.cosh(), 0.0)).norm() < 1e-13);
        assert!((x[(1, 1)] - cx(2.1f64.cosh(), 0.0)).norm() < 1e-13);
        assert!(x[(0, 1)].norm() < 1e-14);
    }

    #[test]
    fn synthesized_cluster_satisfies_condition() {
        let a = AdjacencyMatrix::new(3, vec![0.0, 1.5, -0.5, 1.5, 0.2, 0.0, -0.5, 0.0, 0.0], 0.0).unwrap();
        let theta = PhaseVector::new(vec![0.3, -1.1, 2.5]).unwrap();
        let zm = interaction_from_cluster(&a, &theta, &gauge_identity(3), &tol()).unwrap();
        let f = check_factors(&zm, 1.3);
        assert!(cluster_condition_residual(&f.v, &a, &theta).unwrap() < 1e-12);
    }

    #[test]
    fn canonical_examples() {
        let v = canonical_cluster_interferometer(&AdjacencyMatrix::zeros(2), &PhaseVector::zeros(2), &OrthogonalSeed::identity(2), &tol()).unwrap();
        assert!(v.max_diff(&ComplexMatrix::identity(2)) < 1e-15);

        let v = canonical_cluster_interferometer(&epr(), &PhaseVector::zeros(2), &OrthogonalSeed::identity(2), &tol()).unwrap();
        let expected = ComplexMatrix::new(2, 2, vec![cx(FRAC_1_SQRT_2, 0.0), cx(0.0, FRAC_1_SQRT_2), cx(0.0, FRAC_1_SQRT_2), cx(FRAC_1_SQRT_2, 0.0)]).unwrap();
        assert!(v.max_diff(&expected) < 1e-15);
        let r = real_form_conditions(&v, &epr(), &PhaseVector::zeros(2), &tol()).unwrap();
        assert!(r.imaginary < 1e-15 && r.gram < 1e-15);

        let one = AdjacencyMatrix::new(1, vec![1.0], 0.0).unwrap();
        let theta = PhaseVector::new(vec![PI / 3.0]).unwrap();
        let seed = OrthogonalSeed::new(1, &[-1.0], &tol()).unwrap();
        let v = canonical_cluster_interferometer(&one, &theta, &seed, &tol()).unwrap();
        let expected = -(phase(-PI / 3.0) * cx(1.0, 1.0) * FRAC_1_SQRT_2);
        assert!((v[(0, 0)] - expected).norm() < 1e-15);
        assert!((v[(0, 0)].norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn non_orthogonal_seed_is_rejected() {
        assert!(matches!(OrthogonalSeed::new(1, &[0.5], &tol()), Err(Error::NotOrthogonal { .. })));
    }

    #[test]
    fn condition_residual_for_identity_interferometer() {
        let r = cluster_condition_residual(&ComplexMatrix::identity(2), &epr(), &PhaseVector::zeros(2)).unwrap();
        assert!((r - 2.0).abs() < 1e-15);
    }

    #[test]
    fn interferometer_examples() {
        let u = unitary_from_interferometer(&ComplexMatrix::<f64>::identity(2));
        assert!(u.max_diff(&ComplexMatrix::identity(2).scale(cx(0.0, 1.0))) < 1e-15);

        let v = canonical_cluster_interferometer(&epr(), &PhaseVector::zeros(2), &OrthogonalSeed::identity(2), &tol()).unwrap();
        let minus_swap = ComplexMatrix::from_real(2, 2, &[0.0, -1.0, -1.0, 0.0]).unwrap();
        assert!(unitary_from_interferometer(&v).max_diff(&minus_swap) < 1e-15);

        let one = AdjacencyMatrix::new(1, vec![1.0], 0.0).unwrap();
        let v = canonical_cluster_interferometer(&one, &PhaseVector::zeros(1), &OrthogonalSeed::identity(1), &tol()).unwrap();
        let u = unitary_from_interferometer(&v);
        assert!((u[(0, 0)] - cx(-1.0, 0.0)).norm() < 1e-15);
        let forward = unitary_from_adjacency(&one, &PhaseVector::zeros(1), &tol()).unwrap();
        assert!(u.max_diff(&forward) < 1e-15);
    }
}
