//! Inverse direction: from an interaction matrix back to the cluster whose
//! nullifiers it squeezes.
//!
//! Everything here works with the rotated unitary `Ũ = e^{iΘ}·U·e^{iΘ}`, in
//! terms of which `A = −i·(Ũ − i)(Ũ + i)⁻¹` and the regularity condition is
//! `σ_min(Ũ + i) = σ_min(U + i·e^{−2iΘ})`.

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{AdjacencyMatrix, PhaseVector};
use crate::matfun::{check_symmetric_unitary, hermitian_apply, hermitian_eigen, sigma_min, symmetric_unitary_spectrum, ComplexMatrix};
use crate::scalar::Real;
use crate::synthesis::{closed_form_unchecked, unitary_from_adjacency, validate_gauge, CovarianceReport, InteractionMatrix, SqueezeScale};
use crate::tolerance::Tolerances;

/// Seed of the pseudo-random stage of [`find_regular_phases`] when none is given.
pub const DEFAULT_PHASE_SEED: u64 = 20201130;

const UNIFORM_CANDIDATES: usize = 16;
const RANDOM_CANDIDATES: usize = 64;

/// Real symmetric `K` with `e^{iK} = e^{iΘ}·U·e^{iΘ}`.
#[derive(Debug, Clone, PartialEq)]
pub struct KMatrix<T> {
    k: ComplexMatrix<T>,
}

impl<T: Real> KMatrix<T> {
    /// Wraps a real symmetric matrix given row-major.
    pub fn new(n: usize, entries: Vec<T>, tol: &Tolerances<T>) -> Result<Self> {
        let k = AdjacencyMatrix::new(n, entries, tol.input_symmetry)?;
        Ok(Self { k: k.to_complex() })
    }

    pub fn n(&self) -> usize {
        self.k.rows()
    }

    /// `K` with zero imaginary part.
    pub fn matrix(&self) -> &ComplexMatrix<T> {
        &self.k
    }

    pub fn get(&self, i: usize, j: usize) -> T {
        self.k[(i, j)].re
    }

    /// `e^{iK}`
    pub fn exp_i(&self, tol: &Tolerances<T>) -> Result<ComplexMatrix<T>> {
        Ok(hermitian_eigen(&self.k, tol.rtol)?.map_complex(|l| Complex::new(l.cos(), l.sin())))
    }
}

/// Which stage of the search schedule produced the phases.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchStage {
    Zero,
    /// Global rotation `θ = π·k/16`.
    Uniform { k: usize },
    /// The `draw`-th pseudo-random vector (0-based).
    Random { draw: usize },
}

/// Result of [`find_regular_phases`].
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseSearch<T> {
    pub phases: PhaseVector<T>,
    /// `σ_min(U + i·e^{−2iΘ})` at the returned phases.
    pub sigma_min: T,
    /// The same quantity at `Θ = 0`.
    pub zero_sigma_min: T,
    pub stage: SearchStage,
    /// Number of candidates evaluated, including the returned one.
    pub attempts: usize,
    /// `false` when no candidate reached the acceptance threshold and the
    /// best one above the floor was returned instead.
    pub accepted: bool,
}

/// `e^{iΘ}·U·e^{iΘ}`
pub fn rotated_unitary<T: Real>(u: &ComplexMatrix<T>, theta: &PhaseVector<T>) -> Result<ComplexMatrix<T>> {
    if u.rows() != theta.len() || !u.is_square() {
        return Err(Error::DimensionMismatch {
            expected: format!("{n}x{n} unitary", n = theta.len()),
            found: format!("{}x{}", u.rows(), u.cols()),
        });
    }
    let rot = theta.exp_i(T::one());
    Ok(u.mul_diag_left(&rot).mul_diag_right(&rot))
}

/// `σ_min(U + i·e^{−2iΘ})`
pub fn regularity<T: Real>(u: &ComplexMatrix<T>, theta: &PhaseVector<T>) -> Result<T> {
    let shifted = rotated_unitary(u, theta)?.add_diagonal(Complex::new(T::zero(), T::one()));
    sigma_min(&shifted)
}

/// `A = −i·(Ũ − i)(Ũ + i)⁻¹` with `Ũ = e^{iΘ}·U·e^{iΘ}`.
pub fn adjacency_from_unitary<T: Real>(
    u: &ComplexMatrix<T>,
    theta: &PhaseVector<T>,
    tol: &Tolerances<T>,
) -> Result<AdjacencyMatrix<T>> {
    check_symmetric_unitary(u, tol)?;
    let rotated = rotated_unitary(u, theta)?;
    let i = Complex::new(T::zero(), T::one());
    let plus = rotated.add_diagonal(i);
    let sigma = sigma_min(&plus)?;
    if sigma < tol.regular_floor {
        return Err(Error::SingularPhasePoint { sigma_min: sigma.as_f64() });
    }
    // (Ũ + i) and (Ũ − i) commute, so a left solve gives the same product.
    let quotient = plus.solve(&rotated.add_diagonal(-i))?;
    let a = quotient.scale(-i);
    AdjacencyMatrix::from_complex(&a, tol.oracle, tol.oracle)
}

/// Deterministic search for phases that keep `U + i·e^{−2iΘ}` well conditioned.
///
/// Schedule: `Θ = 0`, then the global rotations `θ = π·k/16` for `k = 1..=16`,
/// then 64 vectors drawn uniformly from `(−π, π]ⁿ` by a ChaCha8 generator
/// seeded with `seed`. The first candidate reaching `regular_accept` wins;
/// failing that the best candidate is returned if it clears `regular_floor`.
pub fn find_regular_phases<T: Real>(u: &ComplexMatrix<T>, seed: u64, tol: &Tolerances<T>) -> Result<PhaseSearch<T>> {
    check_symmetric_unitary(u, tol)?;
    let n = u.rows();
    let mut candidates: Vec<(SearchStage, PhaseVector<T>)> = Vec::with_capacity(1 + UNIFORM_CANDIDATES + RANDOM_CANDIDATES);
    candidates.push((SearchStage::Zero, PhaseVector::zeros(n)));
    for k in 1..=UNIFORM_CANDIDATES {
        let theta = T::PI() * T::lit(k as f64) / T::lit(UNIFORM_CANDIDATES as f64);
        candidates.push((SearchStage::Uniform { k }, PhaseVector::uniform(n, theta)));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for draw in 0..RANDOM_CANDIDATES {
        let angles = (0..n).map(|_| T::lit(rng.random_range(-std::f64::consts::PI..std::f64::consts::PI))).collect();
        candidates.push((SearchStage::Random { draw }, PhaseVector::new(angles)?));
    }

    let mut zero_sigma_min = T::zero();
    let mut best: Option<(T, usize)> = None;
    for (idx, (stage, phases)) in candidates.iter().enumerate() {
        let sigma = regularity(u, phases)?;
        if idx == 0 {
            zero_sigma_min = sigma;
        }
        if sigma >= tol.regular_accept {
            return Ok(PhaseSearch {
                phases: phases.clone(),
                sigma_min: sigma,
                zero_sigma_min,
                stage: *stage,
                attempts: idx + 1,
                accepted: true,
            });
        }
        if best.is_none_or(|(b, _)| sigma > b) {
            best = Some((sigma, idx));
        }
    }
    match best {
        Some((sigma, idx)) if sigma >= tol.regular_floor => {
            let (stage, phases) = candidates.swap_remove(idx);
            Ok(PhaseSearch { phases, sigma_min: sigma, zero_sigma_min, stage, attempts: idx + 1, accepted: false })
        }
        best => Err(Error::SearchExhausted { best: best.map_or(0.0, |(s, _)| s.as_f64()) }),
    }
}

/// `K = Q·diag(φ)·Qᵀ` from the spectral form of `e^{iΘ}·U·e^{iΘ}`,
/// eigenangles `φ` in (−π, π].
pub fn k_matrix_form<T: Real>(u: &ComplexMatrix<T>, theta: &PhaseVector<T>, tol: &Tolerances<T>) -> Result<KMatrix<T>> {
    check_symmetric_unitary(u, tol)?;
    let rotated = rotated_unitary(u, theta)?;
    let spec = symmetric_unitary_spectrum(&rotated, tol)?;
    let k = spec.map(|phi| Complex::new(phi, T::zero())).real_part().symmetrized();
    Ok(KMatrix { k })
}

/// `A = −cos K·(1 + sin K)⁻¹`
pub fn adjacency_from_k<T: Real>(k: &KMatrix<T>, tol: &Tolerances<T>) -> Result<AdjacencyMatrix<T>> {
    let spec = hermitian_eigen(k.matrix(), tol.rtol)?;
    let worst = spec.eigenvalues.iter().fold(T::infinity(), |m, &l| m.min(T::one() + l.sin()));
    if worst < tol.regular_floor {
        return Err(Error::SingularPhasePoint { sigma_min: worst.as_f64() });
    }
    let a = hermitian_apply(k.matrix(), |l| -l.cos() / (T::one() + l.sin()), tol.rtol)?;
    AdjacencyMatrix::from_complex(&a, tol.oracle, tol.oracle)
}

/// Everything [`analyze_interaction`] reports.
#[derive(Debug, Clone, PartialEq)]
pub struct Analysis<T> {
    pub phases: PhaseVector<T>,
    /// `σ_min(U + i·e^{−2iΘ})` at the phases used.
    pub sigma_min: T,
    /// Regularity of caller-supplied phases, if any were given.
    pub given_sigma_min: Option<T>,
    /// Present when the phases came from [`find_regular_phases`].
    pub search: Option<PhaseSearch<T>>,
    pub adjacency: AdjacencyMatrix<T>,
    /// `‖U(A, Θ) − U‖_max` for the recovered cluster.
    pub roundtrip_residual: T,
    /// Compatibility residual of `P` against the recovered cluster.
    pub gauge_residual: T,
    /// Nullifier covariance of the recovered cluster under `Z` at the given `z`.
    pub covariance: CovarianceReport<T>,
}

/// Recovers the cluster approximated by `Z = P·U`.
///
/// Caller-supplied phases are used when they reach `regular_accept`; otherwise
/// the phase search runs with `seed`.
pub fn analyze_interaction<T: Real>(
    zm: &InteractionMatrix<T>,
    theta: Option<&PhaseVector<T>>,
    z: SqueezeScale<T>,
    seed: u64,
    tol: &Tolerances<T>,
) -> Result<Analysis<T>> {
    let z = z.require_positive()?;
    let u = zm.u();
    let given_sigma_min = theta.map(|t| regularity(u, t)).transpose()?;
    let (phases, sigma_min, search) = match (theta, given_sigma_min) {
        (Some(t), Some(s)) if s >= tol.regular_accept => (t.clone(), s, None),
        _ => {
            let found = find_regular_phases(u, seed, tol)?;
            (found.phases.clone(), found.sigma_min, Some(found))
        }
    };
    let adjacency = adjacency_from_unitary(u, &phases, tol)?;
    let roundtrip_residual = unitary_from_adjacency(&adjacency, &phases, tol)?.max_diff(u);
    let gauge_residual = validate_gauge(&adjacency, &phases, zm.p(), tol)?.residual;
    let covariance = closed_form_unchecked(&adjacency, &phases, zm.p(), z, tol)?;
    Ok(Analysis { phases, sigma_min, given_sigma_min, search, adjacency, roundtrip_residual, gauge_residual, covariance })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::cx;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

    fn tol() -> Tolerances<f64> {
        Tolerances::default()
    }

    fn minus_swap() -> ComplexMatrix<f64> {
        ComplexMatrix::from_real(2, 2, &[0.0, -1.0, -1.0, 0.0]).unwrap()
    }

    fn scalar(re: f64, im: f64) -> ComplexMatrix<f64> {
        ComplexMatrix::new(1, 1, vec![cx(re, im)]).unwrap()
    }

    #[test]
    fn inverse_examples() {
        let a = adjacency_from_unitary(&ComplexMatrix::identity(3).scale(cx(0.0, 1.0)), &PhaseVector::zeros(3), &tol()).unwrap();
        assert!(a.weights().iter().all(|w| w.abs() < 1e-15));

        let a = adjacency_from_unitary(&minus_swap(), &PhaseVector::zeros(2), &tol()).unwrap();
        assert!((a.get(0, 1) - 1.0).abs() < 1e-15 && a.get(0, 0).abs() < 1e-15 && a.get(1, 1).abs() < 1e-15);

        let theta = PhaseVector::new(vec![FRAC_PI_4]).unwrap();
        let a = adjacency_from_unitary(&scalar(0.0, -1.0), &theta, &tol()).unwrap();
        assert!((a.get(0, 0) + 1.0).abs() < 1e-14);
        let back = unitary_from_adjacency(&a, &theta, &tol()).unwrap();
        assert!((back[(0, 0)] - cx(0.0, -1.0)).norm() < 1e-14);
    }

    #[test]
    fn singular_phase_point_is_reported() {
        let err = adjacency_from_unitary(&scalar(0.0, -1.0), &PhaseVector::zeros(1), &tol()).unwrap_err();
        assert!(matches!(err, Error::SingularPhasePoint { .. }));
    }

    #[test]
    fn non_unitary_input_is_rejected() {
        let err = adjacency_from_unitary(&scalar(2.0, 0.0), &PhaseVector::zeros(1), &tol()).unwrap_err();
        assert!(matches!(err, Error::NotUnitary { .. }));
    }

    #[test]
    fn search_examples() {
        let s = find_regular_phases(&ComplexMatrix::identity(2).scale(cx(0.0, 1.0)), DEFAULT_PHASE_SEED, &tol()).unwrap();
        assert_eq!(s.stage, SearchStage::Zero);
        assert!((s.sigma_min - 2.0).abs() < 1e-14);

        let s = find_regular_phases(&scalar(0.0, -1.0), DEFAULT_PHASE_SEED, &tol()).unwrap();
        assert!(s.zero_sigma_min < 1e-15);
        assert_ne!(s.stage, SearchStage::Zero);
        assert!(s.accepted && s.sigma_min >= 1e-6);
        assert!((regularity(&scalar(0.0, -1.0), &s.phases).unwrap() - s.sigma_min).abs() < 1e-15);

        let pi4 = PhaseVector::new(vec![FRAC_PI_4]).unwrap();
        assert!((regularity(&scalar(0.0, -1.0), &pi4).unwrap() - 2f64.sqrt()).abs() < 1e-14);

        let s = find_regular_phases(&minus_swap(), DEFAULT_PHASE_SEED, &tol()).unwrap();
        assert_eq!(s.stage, SearchStage::Zero);
        assert!((s.sigma_min - 2f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn search_is_deterministic() {
        let u = ComplexMatrix::from_fn(3, 3, |i, j| if i == j { cx(0.0, -1.0) } else { cx(0.0, 0.0) });
        let a = find_regular_phases(&u, 7, &tol()).unwrap();
        let b = find_regular_phases(&u, 7, &tol()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn k_form_examples() {
        let k = k_matrix_form(&scalar(0.0, 1.0), &PhaseVector::zeros(1), &tol()).unwrap();
        assert!((k.get(0, 0) - FRAC_PI_2).abs() < 1e-14);

        let k = k_matrix_form(&minus_swap(), &PhaseVector::zeros(2), &tol()).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                assert!((k.get(i, j) - FRAC_PI_2).abs() < 1e-14);
            }
        }
        assert!(k.exp_i(&tol()).unwrap().max_diff(&minus_swap()) < 1e-14);

        let k = k_matrix_form(&ComplexMatrix::identity(2), &PhaseVector::zeros(2), &tol()).unwrap();
        assert!(k.matrix().max_abs() < 1e-15);
    }

    #[test]
    fn adjacency_from_k_examples() {
        let a = adjacency_from_k(&KMatrix::new(2, vec![0.0; 4], &tol()).unwrap(), &tol()).unwrap();
        assert!((a.get(0, 0) + 1.0).abs() < 1e-15 && (a.get(1, 1) + 1.0).abs() < 1e-15 && a.get(0, 1).abs() < 1e-15);

        let a = adjacency_from_k(&KMatrix::new(1, vec![FRAC_PI_2], &tol()).unwrap(), &tol()).unwrap();
        assert!(a.get(0, 0).abs() < 1e-15);

        let a = adjacency_from_k(&KMatrix::new(2, vec![FRAC_PI_2; 4], &tol()).unwrap(), &tol()).unwrap();
        assert!((a.get(0, 1) - 1.0).abs() < 1e-14 && a.get(0, 0).abs() < 1e-14);

        let err = adjacency_from_k(&KMatrix::new(1, vec![-FRAC_PI_2], &tol()).unwrap(), &tol()).unwrap_err();
        assert!(matches!(err, Error::SingularPhasePoint { .. }));
    }

    #[test]
    fn k_path_matches_direct_path() {
        let a = AdjacencyMatrix::new(3, vec![0.3, -1.2, 0.0, -1.2, 0.0, 0.7, 0.0, 0.7, -0.4], 0.0).unwrap();
        let theta = PhaseVector::new(vec![0.1, -0.8, 2.0]).unwrap();
        let u = unitary_from_adjacency(&a, &theta, &tol()).unwrap();
        let direct = adjacency_from_unitary(&u, &theta, &tol()).unwrap();
        let via_k = adjacency_from_k(&k_matrix_form(&u, &theta, &tol()).unwrap(), &tol()).unwrap();
        assert!(direct.max_abs_diff(&a) < 1e-12);
        assert!(via_k.max_abs_diff(&a) < 1e-12);
    }

    #[test]
    fn analyze_examples() {
        let z = SqueezeScale::new(1.0).unwrap();
        let zm = InteractionMatrix::from_matrix(ComplexMatrix::identity(2).scale(cx(0.0, 1.0)), &tol()).unwrap();
        let r = analyze_interaction(&zm, None, z, DEFAULT_PHASE_SEED, &tol()).unwrap();
        assert!(r.phases.is_zero());
        assert!(r.adjacency.weights().iter().all(|w| w.abs() < 1e-14));

        let epr = AdjacencyMatrix::new(2, vec![0.0, 1.0, 1.0, 0.0], 0.0).unwrap();
        for scale in [1.0, 1.346574] {
            let zm = InteractionMatrix::from_matrix(minus_swap().scale_real(scale), &tol()).unwrap();
            let r = analyze_interaction(&zm, None, z, DEFAULT_PHASE_SEED, &tol()).unwrap();
            assert!(r.phases.is_zero());
            assert!(r.adjacency.max_abs_diff(&epr) < 1e-14);
            assert!(r.roundtrip_residual < 1e-14);
        }
    }

    #[test]
    fn analyze_uses_regular_given_phases_and_replaces_singular_ones() {
        let z = SqueezeScale::new(1.0).unwrap();
        let zm = InteractionMatrix::from_matrix(scalar(0.0, -1.0), &tol()).unwrap();
        let given = PhaseVector::new(vec![PI / 3.0]).unwrap();
        let r = analyze_interaction(&zm, Some(&given), z, DEFAULT_PHASE_SEED, &tol()).unwrap();
        assert!(r.search.is_none());
        assert_eq!(r.phases, given);

        let r = analyze_interaction(&zm, Some(&PhaseVector::zeros(1)), z, DEFAULT_PHASE_SEED, &tol()).unwrap();
        assert!(r.given_sigma_min.unwrap() < 1e-15);
        assert!(r.search.is_some());
        assert!(r.roundtrip_residual < 1e-12);
    }
}
