//! The standard (GNS) representation of `(M, τ)` on `L²(M, τ)`.
//!
//! `L²(M, τ)` has orthonormal basis `f^k_ab = √(n_k / c_k) e^k_ab` built from
//! the matrix units of each block, so its dimension is `Σ n_k²`. Left
//! multiplication acts on block `k` as `A_k ⊗ I_{n_k}` and the cyclic vector
//! is the class of the identity.

use super::block::BlockAlgebra;
use crate::error::Result;
use crate::linalg::{vector, ComplexMatrix, C64, ZERO};

#[derive(Debug, Clone)]
pub struct GnsRepresentation {
    algebra: BlockAlgebra,
    offsets: Vec<usize>,
    dim: usize,
    cyclic: Vec<C64>,
}

pub fn gns_standard_form(m: &BlockAlgebra) -> GnsRepresentation {
    let mut offsets = Vec::with_capacity(m.num_blocks());
    let mut dim = 0;
    for b in m.blocks() {
        offsets.push(dim);
        dim += b.size * b.size;
    }
    let mut cyclic = vec![ZERO; dim];
    for (k, b) in m.blocks().iter().enumerate() {
        let amp = (m.weights()[k] / b.size as f64).sqrt();
        for a in 0..b.size {
            cyclic[offsets[k] + a * b.size + a] = C64::new(amp, 0.0);
        }
    }
    GnsRepresentation { algebra: m.clone(), offsets, dim, cyclic }
}

impl GnsRepresentation {
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `ξ_τ`, the image of the identity.
    pub fn cyclic_vector(&self) -> &[C64] {
        &self.cyclic
    }

    /// `π_τ(a)`; `a` must be a member.
    pub fn represent(&self, a: &ComplexMatrix) -> Result<ComplexMatrix> {
        self.algebra.require_member(a, "gns_standard_form")?;
        Ok(self.represent_blocks(&self.algebra.extract_blocks(a)))
    }

    fn represent_blocks(&self, parts: &[ComplexMatrix]) -> ComplexMatrix {
        let mut out = ComplexMatrix::zeros(self.dim);
        for (k, p) in parts.iter().enumerate() {
            let n = p.dim();
            let o = self.offsets[k];
            for a2 in 0..n {
                for a in 0..n {
                    let x = p[(a2, a)];
                    for b in 0..n {
                        out[(o + a2 * n + b, o + a * n + b)] = x;
                    }
                }
            }
        }
        out
    }

    /// `⟨π(a) ξ_τ, ξ_τ⟩`.
    pub fn vector_state(&self, a: &ComplexMatrix) -> Result<C64> {
        let pi = self.represent(a)?;
        Ok(vector::inner(&pi.apply(&self.cyclic), &self.cyclic))
    }

    /// `‖π(a) ξ_τ‖ = τ(a*a)^{1/2}`.
    pub fn l2_norm(&self, a: &ComplexMatrix) -> Result<f64> {
        let pi = self.represent(a)?;
        Ok(vector::norm(&pi.apply(&self.cyclic)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::pauli;

    #[test]
    fn one_dimensional_algebra() {
        let g = gns_standard_form(&BlockAlgebra::full(1));
        assert_eq!(g.dim(), 1);
        assert_eq!(g.cyclic_vector(), &[C64::new(1.0, 0.0)]);
        let pi = g.represent(&ComplexMatrix::from_real_diag(&[3.0])).unwrap();
        assert_eq!(pi[(0, 0)], C64::new(3.0, 0.0));
    }

    #[test]
    fn full_m2() {
        let g = gns_standard_form(&BlockAlgebra::full(2));
        assert_eq!(g.dim(), 4);
        let [_, _, sz] = pauli();
        assert!(g.vector_state(&sz).unwrap().norm() < 1e-15);
        let id = ComplexMatrix::identity(2);
        assert!((g.vector_state(&id).unwrap() - C64::new(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn diagonal_cyclic_vector() {
        let m = BlockAlgebra::new(vec![(1, 1); 3], vec![0.2, 0.3, 0.5], vec![0, 1, 2]).unwrap();
        let g = gns_standard_form(&m);
        let expect = [0.2f64.sqrt(), 0.3f64.sqrt(), 0.5f64.sqrt()];
        for (x, e) in g.cyclic_vector().iter().zip(expect) {
            assert!((x.re - e).abs() < 1e-15);
        }
    }
}
