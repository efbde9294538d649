use super::eigen::{eig_hermitian, Symmetry};
use super::matrix::ComplexMatrix;
use crate::error::Result;

/// Largest singular value, from the spectrum of `A*A`.
pub fn op_norm(a: &ComplexMatrix) -> Result<f64> {
    let gram = &a.adjoint() * a;
    let s = eig_hermitian(&gram, Symmetry::Hermitian)?;
    Ok(s.eigenvalues.last().copied().unwrap_or(0.0).max(0.0).sqrt())
}

/// `Re Tr(A* B)`, the real inner product used to orthonormalize Lie bases.
pub fn hs_inner_real(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    a.hs_inner(b).re
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::matrix::{pauli, I};

    #[test]
    fn operator_norms() {
        assert!((op_norm(&ComplexMatrix::identity(3)).unwrap() - 1.0).abs() < 1e-14);
        let a = ComplexMatrix::from_real_diag(&[3.0, -4.0]);
        assert!((op_norm(&a).unwrap() - 4.0).abs() < 1e-14);
    }

    #[test]
    fn paulis_are_orthogonal() {
        let [sx, sy, _] = pauli();
        assert!(hs_inner_real(&sx.scale(I), &sy.scale(I)).abs() < 1e-15);
        assert!((hs_inner_real(&sx, &sx) - 2.0).abs() < 1e-15);
    }
}
