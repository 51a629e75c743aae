//! Dense complex matrix kernels: storage, Hermitian spectral calculus,
//! singular values, polar and Takagi factorizations.

mod eigen;
mod matrix;
mod polar;
mod svd;
mod takagi;

pub use eigen::{hermitian_apply, hermitian_eigen, hermitian_map, HermitianSpectrum};
pub use matrix::ComplexMatrix;
pub use polar::polar_decompose_symmetric;
pub use svd::{sigma_min, singular_values, svd, Svd};
pub use takagi::{symmetric_unitary_spectrum, takagi_symmetric, takagi_symmetric_unitary, SymmetricUnitarySpectrum, Takagi};
pub(crate) use takagi::check_symmetric_unitary;
