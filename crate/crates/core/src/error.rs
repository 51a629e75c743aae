use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Failure modes of the numerical and parsing routines.
///
/// Residuals are reported as `f64` regardless of the working precision.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix entries must be finite")]
    NonFinite,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: String, found: String },
    #[error("matrix is not Hermitian (residual {residual:e})")]
    NotHermitian { residual: f64 },
    #[error("matrix is not symmetric (residual {residual:e})")]
    NotSymmetric { residual: f64 },
    #[error("matrix is not unitary (residual {residual:e})")]
    NotUnitary { residual: f64 },
    #[error("matrix is not real orthogonal (residual {residual:e})")]
    NotOrthogonal { residual: f64 },
    #[error("matrix is not positive definite (smallest eigenvalue {min_eigenvalue:e})")]
    NotPositiveDefinite { min_eigenvalue: f64 },
    #[error("matrix is singular: smallest singular value {sigma_min:e} below threshold {threshold:e}")]
    SingularInput { sigma_min: f64, threshold: f64 },
    #[error("function undefined at eigenvalue {eigenvalue}")]
    DomainError { eigenvalue: f64 },
    #[error("eigensolver did not converge after {sweeps} sweeps")]
    NoConvergence { sweeps: usize },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("line {line}: duplicate edge ({i}, {j})")]
    DuplicateEdge { line: usize, i: usize, j: usize },
    #[error("line {line}: node index {index} out of range for {n} modes")]
    IndexOutOfRange { line: usize, index: usize, n: usize },
    #[error("gauge is incompatible with the cluster: (A+i)e^(iΘ)P e^(-iΘ)(A-i) has relative imaginary part {residual:e}")]
    GaugeIncompatible { residual: f64 },
    #[error("squeezing scale must be positive and finite, got {value}")]
    InvalidScale { value: f64 },
    #[error("z·λ_max = {exponent} exceeds the overflow cap {cap}")]
    ScaleTooLarge { exponent: f64, cap: f64 },
    #[error("U + i·e^(-2iΘ) is singular for these phases (smallest singular value {sigma_min:e})")]
    SingularPhasePoint { sigma_min: f64 },
    #[error("recovered adjacency matrix is not real (imaginary residual {residual:e})")]
    NonRealResult { residual: f64 },
    #[error("no regularizing phases found (best smallest singular value {best:e})")]
    SearchExhausted { best: f64 },
    #[error("z values must be positive and strictly ascending")]
    InvalidSweep,
    #[error("closed form and oracle disagree at z = {z} (residual {residual:e})")]
    OracleMismatch { z: f64, residual: f64 },
}
