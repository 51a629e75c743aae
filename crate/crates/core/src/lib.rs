//! Gaussian cluster states generated by multi-mode squeezing.
//!
//! A cluster is a real symmetric adjacency matrix `A` plus local phases `Θ`.
//! A multi-mode squeezer with interaction `Z = P·U` (polar form) produces a
//! state whose nullifier covariance vanishes as `z → ∞` exactly when
//! `U = −i·e^{−iΘ}(A − i)(A + i)⁻¹e^{−iΘ}`. The modules cover:
//!
//! - [`synthesis`]: cluster and gauge `P` to `Z`, Bogoliubov blocks and
//!   closed-form covariance,
//! - [`analysis`]: `Z` back to a cluster, with phase regularization,
//! - [`blochmessiah`]: squeezers-between-interferometers form and the
//!   cluster condition on the interferometer,
//! - [`oracle`]: an independent path through the matrix exponential,
//! - [`matfun`]: the dense linear algebra underneath.
//!
//! Everything is generic over [`scalar::Real`] (`f32`, `f64`); the aliases
//! below fix the scalar to `f64`.
//!
//! ```
//! use cvcluster::{graph::parse_graph, synthesis::*, Tolerances64};
//!
//! let tol = Tolerances64::default();
//! let a = parse_graph("2\n0 1 1\n").unwrap();
//! let theta = cvcluster::PhaseVector64::zeros(2);
//! let p = gauge_identity(2);
//! let c = covariance_closed_form(&a, &theta, &p, SqueezeScale::new(1.0).unwrap(), &tol).unwrap();
//! assert!((c.max_abs - 2.0 * (-2.0f64).exp()).abs() < 1e-12);
//! ```

pub mod analysis;
pub mod blochmessiah;
pub mod ensemble;
pub mod error;
pub mod graph;
pub mod matfun;
pub mod oracle;
pub mod scalar;
pub mod synthesis;
pub mod tolerance;

pub use error::{Error, Result};
pub use graph::{AdjacencyMatrix, NullifierMap, PhaseVector};
pub use matfun::ComplexMatrix;
pub use scalar::Real;
pub use synthesis::{BogoliubovPair, CovarianceReport, Gauge, InteractionMatrix, SqueezeScale};
pub use tolerance::Tolerances;

pub type ComplexMatrix64 = ComplexMatrix<f64>;
pub type AdjacencyMatrix64 = AdjacencyMatrix<f64>;
pub type PhaseVector64 = PhaseVector<f64>;
pub type InteractionMatrix64 = InteractionMatrix<f64>;
pub type Tolerances64 = Tolerances<f64>;

pub type ComplexMatrix32 = ComplexMatrix<f32>;
pub type AdjacencyMatrix32 = AdjacencyMatrix<f32>;
pub type PhaseVector32 = PhaseVector<f32>;
pub type InteractionMatrix32 = InteractionMatrix<f32>;
pub type Tolerances32 = Tolerances<f32>;
