//! Seeded random matrices and vectors for experiments, examples and tests.

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::algebra::BlockAlgebra;
use crate::linalg::{vector, ComplexMatrix, C64};

pub fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    StandardNormal.sample(rng)
}

pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    C64::new(gaussian(rng), gaussian(rng))
}

pub fn random_complex<R: Rng + ?Sized>(n: usize, rng: &mut R) -> ComplexMatrix {
    ComplexMatrix::from_fn(n, |_, _| complex_gaussian(rng))
}

pub fn random_hermitian<R: Rng + ?Sized>(n: usize, rng: &mut R) -> ComplexMatrix {
    random_complex(n, rng).hermitian_part()
}

pub fn random_skew<R: Rng + ?Sized>(n: usize, rng: &mut R) -> ComplexMatrix {
    let a = random_complex(n, rng);
    (&a - &a.adjoint()).scale_real(0.5)
}

/// Skew-Hermitian with unit Frobenius norm (so operator norm ≤ 1).
pub fn random_unit_skew<R: Rng + ?Sized>(n: usize, rng: &mut R) -> ComplexMatrix {
    let a = random_skew(n, rng);
    let norm = a.frobenius_norm();
    a.scale_real(1.0 / norm)
}

pub fn random_unit_vector<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<C64> {
    let v: Vec<C64> = (0..n).map(|_| complex_gaussian(rng)).collect();
    vector::normalized(&v)
}

pub fn random_member<R: Rng + ?Sized>(m: &BlockAlgebra, rng: &mut R) -> ComplexMatrix {
    let parts: Vec<ComplexMatrix> =
        m.blocks().iter().map(|b| random_complex(b.size, rng)).collect();
    m.assemble(&parts)
}

pub fn random_hermitian_member<R: Rng + ?Sized>(m: &BlockAlgebra, rng: &mut R) -> ComplexMatrix {
    random_member(m, rng).hermitian_part()
}

pub fn random_skew_member<R: Rng + ?Sized>(m: &BlockAlgebra, rng: &mut R) -> ComplexMatrix {
    let a = random_member(m, rng);
    (&a - &a.adjoint()).scale_real(0.5)
}

/// `B* B` for a random member `B`.
pub fn random_psd_member<R: Rng + ?Sized>(m: &BlockAlgebra, rng: &mut R) -> ComplexMatrix {
    let b = random_member(m, rng);
    &b.adjoint() * &b
}
