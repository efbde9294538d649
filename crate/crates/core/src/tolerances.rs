//! Numerical thresholds shared by every module.
//!
//! All defaults live in [`Tolerances::default`]; experiment configs may
//! override individual fields.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Tolerances {
    /// Allowed (skew-)Hermitian symmetry residual, relative to ‖A‖_F.
    pub symmetry: f64,
    /// Jacobi stops once the off-diagonal Frobenius norm is below this times ‖A‖_F.
    pub jacobi_offdiag: f64,
    pub jacobi_max_sweeps: usize,
    /// Distance below which a shift counts as an eigenvalue in `resolvent`.
    pub spectrum_hit: f64,
    /// Relative singular-value ratio below which a direction is treated as null.
    pub nullspace: f64,
    /// Affiliation / membership residual threshold.
    pub affiliation: f64,
    /// Relative eigenvalue gap used to cluster spectra into blocks.
    pub cluster_gap: f64,
    /// Allowed deviation of trace weights from 1.
    pub weight_sum: f64,
    /// Relative admission threshold of the Lie closure.
    pub lie_admission: f64,
    /// Allowed overshoot of compressed eigenvalues past 1/(2z).
    pub clamp: f64,
    /// Eigenvalues of a compressed drift below this fraction of 1/(2z) map to zero.
    pub reconstruct_zero: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            symmetry: 1e-8,
            jacobi_offdiag: 1e-12,
            jacobi_max_sweeps: 100,
            spectrum_hit: 1e-12,
            nullspace: 1e-7,
            affiliation: 1e-8,
            cluster_gap: 1e-7,
            weight_sum: 1e-12,
            lie_admission: 1e-7,
            clamp: 1e-6,
            reconstruct_zero: 1e-12,
        }
    }
}
