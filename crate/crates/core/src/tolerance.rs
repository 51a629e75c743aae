use crate::scalar::Real;

/// Thresholds used throughout the crate, gathered in one place.
///
/// Defaults are tuned for `f64`. Every threshold is floored at a small
/// multiple of machine epsilon so that `f32` instantiations stay meaningful.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances<T> {
    /// Relative tolerance for algebraic identities (symmetry, unitarity, residuals).
    pub rtol: T,
    /// Tolerance for comparisons between the closed form and the exponential oracle.
    pub oracle: T,
    /// Allowed asymmetry of user supplied adjacency matrices before symmetrization.
    pub input_symmetry: T,
    /// Nonsingular means `σ_min ≥ singular · σ_max`.
    pub singular: T,
    /// Phase search accepts a candidate once `σ_min(U + i e^{-2iΘ})` reaches this.
    pub regular_accept: T,
    /// Smallest `σ_min(U + i e^{-2iΘ})` the inverse map will work with.
    pub regular_floor: T,
    /// Relative eigenvalue gap below which eigenvalues are treated as degenerate.
    pub degenerate_gap: T,
    /// Largest `z·λ_max(P)` the exponential oracle accepts.
    pub exponent_cap: T,
}

impl<T: Real> Tolerances<T> {
    fn floored(value: f64) -> T {
        let floor = T::epsilon() * T::lit(1.0e3);
        T::lit(value).max(floor)
    }

    /// Returns a copy with the algebraic tolerance replaced.
    pub fn with_rtol(mut self, rtol: T) -> Self {
        self.rtol = rtol;
        self
    }
}

impl<T: Real> Default for Tolerances<T> {
    fn default() -> Self {
        Self {
            rtol: Self::floored(1e-9),
            oracle: Self::floored(1e-8),
            input_symmetry: Self::floored(1e-12),
            singular: Self::floored(1e-10),
            regular_accept: Self::floored(1e-6),
            regular_floor: Self::floored(1e-8),
            degenerate_gap: Self::floored(1e-8),
            exponent_cap: T::lit(30.0),
        }
    }
}
