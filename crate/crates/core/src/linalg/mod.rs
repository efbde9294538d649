//! Dense complex linear algebra shared by every other module.

pub mod eigen;
pub mod matrix;
pub mod norms;
pub mod nullspace;
pub mod resolvent;
pub mod vector;

pub use eigen::{
    apply_spectral_function, eig_hermitian, eig_hermitian_with, expm_hermitian, expm_skew,
    SpectralDecomposition, Symmetry,
};
pub use matrix::{pauli, ComplexMatrix, MatrixJson, C64, I, ONE, ZERO};
pub use norms::{hs_inner_real, op_norm};
pub use nullspace::{commutator_superoperator, nullspace_basis, nullspace_basis_with};
pub use resolvent::{resolvent, resolvent_apply, resolvent_with};
