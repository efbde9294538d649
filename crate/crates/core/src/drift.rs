//! Bounded approximation of an unbounded skew-adjoint drift.
//!
//! The drift `V₀` is compactified spectrally by `q_z(iω) = iω/(z² + ω²)`,
//! compressed by a trace-preserving conditional expectation, and mapped
//! back through the inverse of `q_z` restricted to `|ω| ≥ z`:
//! `q̃_z⁻¹(iu) = i(1 + √(1 − 4z²u²))/(2u)`, with `q̃_z⁻¹(0) = 0`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::ConditionalExpectation;
use crate::error::{Error, Result};
use crate::linalg::{
    apply_spectral_function, eig_hermitian_with, resolvent_apply, vector, ComplexMatrix,
    Symmetry, C64, I,
};
use crate::tolerances::Tolerances;

/// Scalar compactification `ω ↦ ω/(z² + ω²)` on the imaginary parts.
pub fn q_z(omega: f64, z: f64) -> f64 {
    omega / (z * z + omega * omega)
}

/// Inverse of `q_z` on `|ω| ≥ z`; zero maps to zero.
pub fn q_z_inverse(u: f64, z: f64) -> f64 {
    if u == 0.0 {
        return 0.0;
    }
    let disc = (1.0 - 4.0 * z * z * u * u).max(0.0);
    (1.0 + disc.sqrt()) / (2.0 * u)
}

#[derive(Debug, Clone)]
pub struct DriftApproxParams {
    pub z: f64,
    pub expectation: ConditionalExpectation,
    pub probes: Vec<Vec<C64>>,
}

impl DriftApproxParams {
    pub fn new(z: f64, expectation: ConditionalExpectation, probes: Vec<Vec<C64>>) -> Result<Self> {
        if !(z > 0.0 && z.is_finite()) {
            return Err(Error::InvalidArgument(format!("z must be positive, got {z}")));
        }
        check_probes(&probes, expectation.algebra().ambient_dim())?;
        Ok(Self { z, expectation, probes })
    }
}

fn check_probes(probes: &[Vec<C64>], n: usize) -> Result<()> {
    if probes.is_empty() {
        return Err(Error::InvalidArgument("at least one probe vector is required".into()));
    }
    for p in probes {
        if p.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: p.len() });
        }
        if (vector::norm(p) - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidArgument("probe vectors must be unit vectors".into()));
        }
    }
    Ok(())
}

/// The standard basis, used as the default probe set.
pub fn basis_probes(n: usize) -> Vec<Vec<C64>> {
    (0..n).map(|k| vector::basis(n, k)).collect()
}

/// `Q_z = q_z(V₀)`.
pub fn q_z_map(v0: &ComplexMatrix, z: f64) -> Result<ComplexMatrix> {
    q_z_map_with(v0, z, &Tolerances::default())
}

pub fn q_z_map_with(v0: &ComplexMatrix, z: f64, tol: &Tolerances) -> Result<ComplexMatrix> {
    if !(z > 0.0) {
        return Err(Error::InvalidArgument(format!("z must be positive, got {z}")));
    }
    let s = eig_hermitian_with(v0, Symmetry::SkewHermitian, tol)?;
    apply_spectral_function(&s, |w| I * q_z(w, z))
}

/// `E(Q_z)`: the inner compression.
pub fn compress(qz: &ComplexMatrix, e: &ConditionalExpectation) -> Result<ComplexMatrix> {
    e.apply(qz)
}

/// `q̃_z⁻¹(C)` with eigenvalues clamped to `[−1/(2z), 1/(2z)]`.
pub fn reconstruct(c: &ComplexMatrix, z: f64) -> Result<ComplexMatrix> {
    reconstruct_with(c, z, &Tolerances::default())
}

pub fn reconstruct_with(c: &ComplexMatrix, z: f64, tol: &Tolerances) -> Result<ComplexMatrix> {
    if !(z > 0.0) {
        return Err(Error::InvalidArgument(format!("z must be positive, got {z}")));
    }
    let bound = 1.0 / (2.0 * z);
    let s = eig_hermitian_with(c, Symmetry::SkewHermitian, tol)?;
    for &u in &s.eigenvalues {
        if u.abs() > bound + tol.clamp {
            return Err(Error::ClampExceeded { value: u, bound });
        }
    }
    let zero_band = tol.reconstruct_zero * bound;
    apply_spectral_function(&s, |u| {
        if u.abs() <= zero_band {
            C64::new(0.0, 0.0)
        } else {
            I * q_z_inverse(u.clamp(-bound, bound), z)
        }
    })
}

/// `(V₀)_{z,E} = q̃_z⁻¹(E(q_z(V₀)))`.
pub fn drift_approximation(v0: &ComplexMatrix, params: &DriftApproxParams) -> Result<ComplexMatrix> {
    drift_approximation_with(v0, params, &Tolerances::default())
}

pub fn drift_approximation_with(
    v0: &ComplexMatrix,
    params: &DriftApproxParams,
    tol: &Tolerances,
) -> Result<ComplexMatrix> {
    let m = params.expectation.algebra();
    let residual = m.commutant_residual(v0);
    if v0.dim() != m.ambient_dim() || residual > tol.affiliation {
        return Err(Error::NotMember { op: "drift_approximation", residual });
    }
    let qz = q_z_map_with(v0, params.z, tol)?;
    let compressed = compress(&qz, &params.expectation)?;
    reconstruct_with(&compressed, params.z, tol)
}

/// `max_ξ ‖(−iA − i)⁻¹ξ − (−iB − i)⁻¹ξ‖` over the probe vectors.
pub fn srt_probe_distance(a: &ComplexMatrix, b: &ComplexMatrix, probes: &[Vec<C64>]) -> Result<f64> {
    a.check_same_dim(b)?;
    check_probes(probes, a.dim())?;
    let ha = a.scale(-I);
    let hb = b.scale(-I);
    let mut worst = 0.0f64;
    for p in probes {
        let ra = resolvent_apply(&ha, I, p)?;
        let rb = resolvent_apply(&hb, I, p)?;
        worst = worst.max(vector::norm(&vector::sub(&ra, &rb)));
    }
    Ok(worst)
}

/// One row per `(z, refinement level)`, z outer and refinement inner.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepTable {
    pub z_grid: Vec<f64>,
    pub levels: usize,
    /// `distances[i][j]` for `z_grid[i]` and refinement `j`.
    pub distances: Vec<Vec<f64>>,
}

impl SweepTable {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("z,refinement_index,srt_distance\n");
        for (z, row) in self.z_grid.iter().zip(&self.distances) {
            for (j, d) in row.iter().enumerate() {
                out.push_str(&format!("{},{},{}\n", fmt17(*z), j, fmt17(*d)));
            }
        }
        out
    }

    pub fn bottom_right(&self) -> f64 {
        *self.distances.last().and_then(|r| r.last()).unwrap_or(&f64::NAN)
    }

    /// Whether every row is non-increasing along the refinement chain, up to `slack`.
    pub fn rows_non_increasing(&self, slack: f64) -> bool {
        self.distances.iter().all(|row| row.windows(2).all(|w| w[1] <= w[0] + slack))
    }
}

/// 17 significant digits.
pub(crate) fn fmt17(x: f64) -> String {
    format!("{x:.16e}")
}

/// SRT probe distance between `V₀` and its approximation over a grid of `z`
/// and a refinement chain of expectations ending at the identity.
pub fn convergence_sweep(
    v0: &ComplexMatrix,
    z_grid: &[f64],
    chain: &[ConditionalExpectation],
    probes: &[Vec<C64>],
) -> Result<SweepTable> {
    if chain.is_empty() || !chain.last().unwrap().is_identity() {
        return Err(Error::InvalidArgument("refinement chain must end at the identity".into()));
    }
    for w in chain.windows(2) {
        if !w[1].refines(&w[0])? {
            return Err(Error::InvalidArgument("refinement chain is not increasing".into()));
        }
    }
    check_probes(probes, v0.dim())?;
    let cells: Vec<(usize, usize)> =
        (0..z_grid.len()).flat_map(|i| (0..chain.len()).map(move |j| (i, j))).collect();
    let values: Vec<f64> = cells
        .par_iter()
        .map(|&(i, j)| {
            let params = DriftApproxParams::new(z_grid[i], chain[j].clone(), probes.to_vec())?;
            let approx = drift_approximation(v0, &params)?;
            srt_probe_distance(&approx, v0, probes)
        })
        .collect::<Result<Vec<f64>>>()?;
    let distances = values.chunks(chain.len()).map(|c| c.to_vec()).collect();
    Ok(SweepTable { z_grid: z_grid.to_vec(), levels: chain.len(), distances })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{conditional_expectation, BlockAlgebra, Partition};

    fn diag_skew(w: &[f64]) -> ComplexMatrix {
        let d: Vec<C64> = w.iter().map(|&x| I * x).collect();
        ComplexMatrix::from_diag(&d)
    }

    #[test]
    fn scalar_maps() {
        assert!((q_z(1.0, 0.5) - 0.8).abs() < 1e-15);
        assert!((q_z(0.7, 0.7) - 1.0 / 1.4).abs() < 1e-15);
        assert!((q_z_inverse(0.8, 0.5) - 1.0).abs() < 1e-14);
        assert_eq!(q_z_inverse(0.0, 0.3), 0.0);
        // inside the band: reflection ω ↦ z²/ω
        assert!((q_z_inverse(q_z(0.5, 1.0), 1.0) - 2.0).abs() < 1e-12);
    }

    #[test]
    fn q_z_examples() {
        assert_eq!(q_z_map(&ComplexMatrix::zeros(2), 0.5).unwrap(), ComplexMatrix::zeros(2));
        let q = q_z_map(&diag_skew(&[1.0]), 0.5).unwrap();
        assert!((q[(0, 0)] - I * 0.8).norm() < 1e-15);
        let z = 0.3;
        let q = q_z_map(&diag_skew(&[z, -z]), z).unwrap();
        assert!((q[(0, 0)] - I / (2.0 * z)).norm() < 1e-14);
        assert!((q[(1, 1)] + I / (2.0 * z)).norm() < 1e-14);
    }

    #[test]
    fn reconstruct_examples() {
        let r = reconstruct(&diag_skew(&[0.8]), 0.5).unwrap();
        assert!((r[(0, 0)] - I).norm() < 1e-14);
        assert_eq!(reconstruct(&ComplexMatrix::zeros(3), 0.5).unwrap(), ComplexMatrix::zeros(3));
        let q = q_z_map(&diag_skew(&[0.5]), 1.0).unwrap();
        let r = reconstruct(&q, 1.0).unwrap();
        assert!((r[(0, 0)] - I * 2.0).norm() < 1e-12);
    }

    #[test]
    fn overshoot_is_rejected() {
        let c = diag_skew(&[1.0 + 1e-3]);
        assert!(matches!(reconstruct(&c, 0.5), Err(Error::ClampExceeded { .. })));
        let c = diag_skew(&[1.0 + 1e-9]);
        let r = reconstruct(&c, 0.5).unwrap();
        assert!((r[(0, 0)] - I * 0.5).norm() < 1e-6);
    }

    #[test]
    fn srt_distance_scalar_case() {
        let probes = basis_probes(1);
        let d = srt_probe_distance(&ComplexMatrix::zeros(1), &diag_skew(&[1.0]), &probes).unwrap();
        assert!((d - 2f64.sqrt() / 2.0).abs() < 1e-15);
        let a = diag_skew(&[1.0, 3.0]);
        assert_eq!(srt_probe_distance(&a, &a, &basis_probes(2)).unwrap(), 0.0);
    }

    #[test]
    fn compress_examples() {
        let m = BlockAlgebra::diagonal(4);
        let q = q_z_map(&diag_skew(&[1.0, -1.0, 2.0, -2.0]), 0.5).unwrap();
        let id = ConditionalExpectation::identity(&m);
        assert!((&compress(&q, &id).unwrap() - &q).max_abs() < 1e-15);
        let scal = ConditionalExpectation::onto_scalars(&m);
        assert!(compress(&q, &scal).unwrap().max_abs() < 1e-15);
        let pair = conditional_expectation(&m, &Partition::Merge(vec![vec![0, 1], vec![2, 3]])).unwrap();
        let q = q_z_map(&diag_skew(&[1.0, 2.0, 3.0, 4.0]), 0.5).unwrap();
        let c = compress(&q, &pair).unwrap();
        let mean01 = (q[(0, 0)] + q[(1, 1)]) / 2.0;
        assert!((c[(0, 0)] - mean01).norm() < 1e-15 && (c[(1, 1)] - mean01).norm() < 1e-15);
    }

    #[test]
    fn sweep_rejects_chain_without_identity() {
        let m = BlockAlgebra::diagonal(2);
        let chain = vec![ConditionalExpectation::onto_scalars(&m)];
        let v0 = diag_skew(&[1.0, 2.0]);
        assert!(convergence_sweep(&v0, &[0.5], &chain, &basis_probes(2)).is_err());
    }

    #[test]
    fn non_member_drift_rejected() {
        let m = BlockAlgebra::diagonal(2);
        let [sx, _, _] = crate::linalg::pauli();
        let params =
            DriftApproxParams::new(0.5, ConditionalExpectation::identity(&m), basis_probes(2)).unwrap();
        assert!(matches!(
            drift_approximation(&sx.scale(I), &params),
            Err(Error::NotMember { .. })
        ));
    }
}
