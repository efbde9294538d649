//! Truncated Jaynes–Cummings and harmonic-oscillator models.

pub mod jaynes_cummings;
pub mod oscillator;

pub use jaynes_cummings::{
    build_jaynes_cummings, build_jaynes_cummings_with, verify_symmetry, JaynesCummingsModel,
    JcSymmetryReport, JcVariant,
};
pub use oscillator::{build_oscillator, verify_oscillator_brackets, OscillatorModel, OscillatorReport};

use crate::linalg::{ComplexMatrix, C64};

/// Fock-space annihilation operator: `a[n−1, n] = √n`.
pub fn annihilation(n_max: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(n_max, |i, j| {
        if j == i + 1 {
            C64::new((j as f64).sqrt(), 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    })
}

/// Rows and columns of `a` at `idx`, in that order.
pub fn submatrix(a: &ComplexMatrix, idx: &[usize]) -> ComplexMatrix {
    ComplexMatrix::from_fn(idx.len(), |i, j| a[(idx[i], idx[j])])
}
