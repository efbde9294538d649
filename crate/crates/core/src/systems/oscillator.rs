//! The harmonic oscillator with controlled position and momentum, in a
//! Fock truncation. Its operators admit no finite von Neumann algebra; the
//! checks here are about its Lie structure and the triviality of the
//! commutant of the position and momentum exponentials.

use serde::{Deserialize, Serialize};

use super::annihilation;
use crate::algebra::commutant;
use crate::error::{Error, Result};
use crate::lie::{lie_closure, ClosureOptions, Field};
use crate::linalg::{expm_hermitian, ComplexMatrix, I};
use crate::tolerances::Tolerances;

#[derive(Debug, Clone)]
pub struct OscillatorModel {
    pub n_max: usize,
    pub interior_dim: usize,
    pub x: ComplexMatrix,
    pub p: ComplexMatrix,
    pub v0: ComplexMatrix,
    pub v_plus: ComplexMatrix,
    pub v_minus: ComplexMatrix,
    pub v1: ComplexMatrix,
    pub v2: ComplexMatrix,
}

/// Interior defaults to the lowest 75% of Fock levels.
pub fn build_oscillator(n_max: usize) -> Result<OscillatorModel> {
    build_oscillator_with(n_max, n_max - n_max / 4)
}

pub fn build_oscillator_with(n_max: usize, interior_dim: usize) -> Result<OscillatorModel> {
    if n_max < 8 {
        return Err(Error::BadCutoff(format!("Fock cutoff must be at least 8, got {n_max}")));
    }
    if interior_dim == 0 || interior_dim > n_max {
        return Err(Error::BadCutoff(format!("interior {interior_dim} outside 1..={n_max}")));
    }
    let a = annihilation(n_max);
    let ad = a.adjoint();
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let x = (&a + &ad).scale_real(r);
    let p = (&ad - &a).scale(I * r);
    let v0 = (&(&p * &p) - &(&x * &x)).scale(-I * 0.5);
    let v_plus = (&p - &x).scale_real(r);
    let v_minus = (&p + &x).scale_real(-r);
    let v1 = &v_plus - &v_minus;
    let v2 = (&v_plus + &v_minus).scale(I);
    Ok(OscillatorModel { n_max, interior_dim, x, p, v0, v_plus, v_minus, v1, v2 })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OscillatorReport {
    pub n_max: usize,
    pub interior_dim: usize,
    /// `‖[x,p] − iI‖` on the interior and over the whole truncation.
    pub ccr_residual: f64,
    pub ccr_edge_residual: f64,
    /// Relative interior errors of `[V₀,V₊] = V₊`, `[V₀,V₋] = −V₋`, `[V₊,V₋] = −I`.
    pub bracket_residuals: [f64; 3],
    /// The same three errors over the whole truncation.
    pub edge_residual: [f64; 3],
    /// Relative interior error of `[V₊,V₋] = iI`.
    pub plus_minus_vs_i: f64,
    /// `‖V₁ − √2 p‖` and `‖V₂ + √2 i x‖`.
    pub definitional_residuals: [f64; 2],
    /// Complex dimension of the span closed under brackets.
    pub dim: usize,
    /// Dimension over ℝ with real coefficients only.
    pub dim_real_coefficients: usize,
    /// Dimension of the commutant of the sampled exponentials on the interior.
    pub commutant_dim: usize,
}

fn rel_interior(a: &ComplexMatrix, target: &ComplexMatrix, m: usize) -> f64 {
    let t = target.compress(m).frobenius_norm().max(1e-300);
    (a - target).compress(m).frobenius_norm() / t
}

fn rel_full(a: &ComplexMatrix, target: &ComplexMatrix) -> f64 {
    (a - target).frobenius_norm() / target.frobenius_norm().max(1e-300)
}

/// Samples `t` for `e^{t x}, e^{t p}` in the commutant check.
pub const EXP_SAMPLES: [f64; 2] = [0.25, 0.5];

pub fn verify_oscillator_brackets(model: &OscillatorModel) -> Result<OscillatorReport> {
    let tol = Tolerances::default();
    let m = model.interior_dim;
    let n = model.n_max;
    let id = ComplexMatrix::identity(n);

    let ccr = &model.x.commutator(&model.p) - &id.scale(I);
    let pairs = [
        (model.v0.commutator(&model.v_plus), model.v_plus.clone()),
        (model.v0.commutator(&model.v_minus), model.v_minus.scale_real(-1.0)),
        (model.v_plus.commutator(&model.v_minus), id.scale_real(-1.0)),
    ];
    let mut bracket_residuals = [0.0; 3];
    let mut edge_residual = [0.0; 3];
    for (k, (lhs, rhs)) in pairs.iter().enumerate() {
        bracket_residuals[k] = rel_interior(lhs, rhs, m);
        edge_residual[k] = rel_full(lhs, rhs);
    }
    let plus_minus_vs_i = rel_interior(&pairs[2].0, &id.scale(I), m);
    let s2 = 2f64.sqrt();
    let definitional_residuals = [
        (&model.v1 - &model.p.scale_real(s2)).max_abs(),
        (&model.v2 + &model.x.scale(I * s2)).max_abs(),
    ];

    let gens = [model.v0.clone(), model.v1.clone(), model.v2.clone()];
    let complex = lie_closure(
        &gens,
        &ClosureOptions { field: Field::Complex, window: Some(m), admission: tol.lie_admission, max_dim: Some(64) },
    )?;
    let real = lie_closure(
        &gens,
        &ClosureOptions { field: Field::Real, window: Some(m), admission: tol.lie_admission, max_dim: Some(64) },
    )?;

    let xc = model.x.compress(m);
    let pc = model.p.compress(m);
    let mut samples = Vec::new();
    for t in EXP_SAMPLES {
        samples.push(expm_hermitian(&xc, t)?);
        samples.push(expm_hermitian(&pc, t)?);
    }
    let comm = commutant(&samples)?;

    Ok(OscillatorReport {
        n_max: n,
        interior_dim: m,
        ccr_residual: ccr.compress(m).max_abs(),
        ccr_edge_residual: ccr.max_abs(),
        bracket_residuals,
        edge_residual,
        plus_minus_vs_i,
        definitional_residuals,
        dim: complex.dim(),
        dim_real_coefficients: real.dim(),
        commutant_dim: comm.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::C64;

    #[test]
    fn canonical_commutation_in_truncation() {
        let m = build_oscillator(10).unwrap();
        let c = &m.x.commutator(&m.p) - &ComplexMatrix::identity(10).scale(I);
        assert!(c.compress(9).max_abs() < 1e-13);
        assert!((c[(9, 9)] - C64::new(0.0, -10.0)).norm() < 1e-12);
    }

    #[test]
    fn definitional_identities() {
        let m = build_oscillator(12).unwrap();
        let s2 = 2f64.sqrt();
        assert!((&m.v1 - &m.p.scale_real(s2)).max_abs() < 1e-14);
        assert!((&m.v2 + &m.x.scale(I * s2)).max_abs() < 1e-14);
        assert!(m.v0.skew_residual() < 1e-13);
        assert!(matches!(build_oscillator(7), Err(Error::BadCutoff(_))));
    }

    #[test]
    fn drift_brackets_hold_on_interior() {
        let m = build_oscillator(16).unwrap();
        let r = verify_oscillator_brackets(&m).unwrap();
        assert!(r.bracket_residuals[0] < 1e-12 && r.bracket_residuals[1] < 1e-12);
        assert!(r.plus_minus_vs_i < 1e-12);
        assert_eq!(r.dim, 4);
        assert_eq!(r.commutant_dim, 1);
    }
}
