//! Dense complex linear algebra for multipartite density matrices.
//!
//! Multipartite indices are mixed-radix with the first subsystem most
//! significant, matching the Kronecker product convention of [`tensor`].

mod density;
mod eigen;
mod entropy;
pub mod linalg;
mod matrix;
mod partial;
mod state;

pub use density::{check_dims, validity_of, DensityMatrix, Validity, MAX_ORDER, VALIDITY_TOL};
pub use eigen::{hermitian_eigensystem, hermitian_eigenvalues, Eigensystem, HERMITIAN_INPUT_TOL};
pub use entropy::{
    entropy_of, mutual_information, mutual_information_with, spectral_entropy,
    spectral_entropy_compensated, von_neumann_entropy, Partition, ENTROPY_CLAMP,
};
pub use matrix::{tensor, tensor_all, ComplexMatrix};
pub use partial::partial_trace;
pub use state::{StateVector, NORMALIZATION_TOL};

pub(crate) use eigen::{eigensystem_unchecked, eigenvalues_unchecked};
pub(crate) use entropy::mutual_information_op;
