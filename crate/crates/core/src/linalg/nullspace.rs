use super::eigen::{eig_hermitian, Symmetry};
use super::matrix::{ComplexMatrix, C64};
use crate::error::Result;
use crate::tolerances::Tolerances;

/// Orthonormal null vectors of a Gram matrix `G = L*L`: eigenvectors whose
/// eigenvalue is below `tol² · max(λ_max, scale)`. A positive `scale` lets an
/// all-roundoff Gram matrix be recognized as null.
pub(crate) fn gram_null_vectors(gram: &ComplexMatrix, tol: f64, scale: f64) -> Result<Vec<Vec<C64>>> {
    let s = eig_hermitian(gram, Symmetry::Hermitian)?;
    let top = s.eigenvalues.last().copied().unwrap_or(0.0).max(scale);
    let cut = (tol * tol * top).max(1e-300);
    Ok((0..s.dim())
        .filter(|&k| s.eigenvalues[k] <= cut)
        .map(|k| s.eigenvector(k))
        .collect())
}

/// Hilbert–Schmidt orthonormal basis of `{X : L(X) = 0}` where `L` acts on
/// row-major vectorized `n × n` matrices as an `n² × n²` matrix.
pub fn nullspace_basis(l: &ComplexMatrix) -> Result<Vec<ComplexMatrix>> {
    nullspace_basis_with(l, &Tolerances::default())
}

pub fn nullspace_basis_with(l: &ComplexMatrix, tol: &Tolerances) -> Result<Vec<ComplexMatrix>> {
    let gram = &l.adjoint() * l;
    gram_null_vectors(&gram, tol.nullspace, 0.0)?
        .into_iter()
        .map(ComplexMatrix::from_row_major)
        .collect()
}

/// The `n² × n²` matrix of `X ↦ AX − XA` on row-major vectorizations.
pub fn commutator_superoperator(a: &ComplexMatrix) -> ComplexMatrix {
    let n = a.dim();
    let id = ComplexMatrix::identity(n);
    // vec_r(AX) = (A ⊗ I) vec_r(X), vec_r(XA) = (I ⊗ Aᵀ) vec_r(X)
    &a.kron(&id) - &id.kron(&a.transpose())
}
