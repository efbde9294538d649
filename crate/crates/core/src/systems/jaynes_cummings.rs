//! A single two-level atom in a cavity, on `ℂ² ⊗ span{ψ_0, …, ψ_{n_max−1}}`.
//!
//! The basis vector `e_i ⊗ ψ_n` sits at index `i·n_max + n`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{annihilation, submatrix};
use crate::algebra::{check_affiliated_with, BlockAlgebra};
use crate::error::{Error, Result};
use crate::lie::{lie_closure, ClosureOptions};
use crate::linalg::{pauli, ComplexMatrix, C64, I};
use crate::tolerances::Tolerances;

/// Which operator generates the `U(1)` symmetry.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum JcVariant {
    /// `σ₃ ⊗ 1 + 1 ⊗ a*a`.
    #[default]
    Printed,
    /// `σ₃/2 ⊗ 1 + 1 ⊗ a*a`, the excitation number up to a constant.
    ExcitationNumber,
}

#[derive(Debug, Clone)]
pub struct JaynesCummingsModel {
    pub n_max: usize,
    pub omega_a: f64,
    pub omega_i: f64,
    pub omega_c: f64,
    pub variant: JcVariant,
    pub h1: ComplexMatrix,
    pub h2: ComplexMatrix,
    pub h3: ComplexMatrix,
    pub v: ComplexMatrix,
    pub h_jc: ComplexMatrix,
    /// Coordinate indices of each eigenspace of `V`, by increasing eigenvalue.
    pub eigenspaces: Vec<(f64, Vec<usize>)>,
    /// `⊕ M(eigenspace)`, the commutant of `V`.
    pub eigenblock_algebra: BlockAlgebra,
}

impl JaynesCummingsModel {
    pub fn ambient_dim(&self) -> usize {
        2 * self.n_max
    }

    /// Fock levels below this are the interior.
    pub fn interior_levels(&self) -> usize {
        self.n_max - self.n_max / 4
    }

    fn fock_level(&self, idx: usize) -> usize {
        idx % self.n_max
    }

    fn is_interior_space(&self, space: &[usize]) -> bool {
        space.iter().all(|&i| self.fock_level(i) < self.interior_levels())
    }

    pub fn hamiltonians(&self) -> [&ComplexMatrix; 3] {
        [&self.h1, &self.h2, &self.h3]
    }
}

pub fn build_jaynes_cummings(n_max: usize, omega_a: f64, omega_i: f64, omega_c: f64) -> Result<JaynesCummingsModel> {
    build_jaynes_cummings_with(n_max, omega_a, omega_i, omega_c, JcVariant::Printed)
}

pub fn build_jaynes_cummings_with(
    n_max: usize,
    omega_a: f64,
    omega_i: f64,
    omega_c: f64,
    variant: JcVariant,
) -> Result<JaynesCummingsModel> {
    if n_max < 3 {
        return Err(Error::BadCutoff(format!("Fock cutoff must be at least 3, got {n_max}")));
    }
    let [s1, s2, s3] = pauli();
    let s_plus = &s1 + &s2.scale(I);
    let s_minus = &s1 - &s2.scale(I);
    let a = annihilation(n_max);
    let ad = a.adjoint();
    let one2 = ComplexMatrix::identity(2);
    let one = ComplexMatrix::identity(n_max);
    let number = &ad * &a;

    let h1 = s3.kron(&one).scale_real(0.5);
    let h2 = (&s_plus.kron(&a) + &s_minus.kron(&ad)).scale_real(0.5);
    let h3 = one2.kron(&number);
    let spin = match variant {
        JcVariant::Printed => s3.kron(&one),
        JcVariant::ExcitationNumber => s3.kron(&one).scale_real(0.5),
    };
    let v = &spin + &h3;
    let h_jc = &(&h1.scale_real(omega_a) + &h2.scale_real(omega_i)) + &h3.scale_real(omega_c);

    // V is diagonal in the product basis; group coordinates by eigenvalue.
    let mut groups: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
    for (i, d) in v.diagonal().iter().enumerate() {
        groups.entry((2.0 * d.re).round() as i64).or_default().push(i);
    }
    let eigenspaces: Vec<(f64, Vec<usize>)> =
        groups.into_iter().map(|(k, idx)| (k as f64 / 2.0, idx)).collect();
    let eigenblock_algebra = space_algebra(&eigenspaces.iter().map(|(_, s)| s.clone()).collect::<Vec<_>>())?;

    Ok(JaynesCummingsModel {
        n_max,
        omega_a,
        omega_i,
        omega_c,
        variant,
        h1,
        h2,
        h3,
        v,
        h_jc,
        eigenspaces,
        eigenblock_algebra,
    })
}

/// Full matrix algebra on each coordinate subspace, trace weights by dimension.
fn space_algebra(spaces: &[Vec<usize>]) -> Result<BlockAlgebra> {
    let blocks: Vec<(usize, usize)> = spaces.iter().map(|s| (s.len(), 1)).collect();
    let perm: Vec<usize> = spaces.iter().flatten().copied().collect();
    BlockAlgebra::new(blocks.clone(), BlockAlgebra::uniform_weights(&blocks), perm)
}

/// Commutation of the Hamiltonians with the spectral projections of `V`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct JcSymmetryReport {
    pub n_max: usize,
    pub interior_levels: usize,
    pub variant: JcVariant,
    /// Integer eigenvalue ladder `n ± 1` confirmed on the interior.
    pub integer_spectrum: bool,
    /// `max_P ‖[H_i, P]‖_F` over interior spectral projections, for `H₁, H₂, H₃`.
    pub interior_residual: [f64; 3],
    /// The same over the remaining projections.
    pub edge_residual: [f64; 3],
    pub commutes: bool,
    /// Affiliation residual of each `H_i` against the interior eigenblock algebra.
    pub affiliation_residual: [f64; 3],
    /// Real dimension of the closure of `{iH₁, iH₂, iH₃}` on the interior.
    pub dim: usize,
    /// Whether the closure was stopped at its size cap.
    pub closure_capped: bool,
    #[serde(rename = "dim_uM")]
    pub dim_u_m: usize,
    pub closure_affiliation_residual: f64,
    pub closure_affiliated: bool,
    pub strong_controllable: bool,
    pub is_factor: bool,
    pub pure_state_obstruction: bool,
}

pub fn verify_symmetry(model: &JaynesCummingsModel) -> Result<JcSymmetryReport> {
    let tol = Tolerances::default();
    let mut interior_residual = [0.0f64; 3];
    let mut edge_residual = [0.0f64; 3];
    let n = model.ambient_dim();
    for (_, space) in &model.eigenspaces {
        let mut p = ComplexMatrix::zeros(n);
        for &i in space {
            p[(i, i)] = C64::new(1.0, 0.0);
        }
        let interior = model.is_interior_space(space);
        for (k, h) in model.hamiltonians().iter().enumerate() {
            let r = h.commutator(&p).frobenius_norm();
            let slot = if interior { &mut interior_residual[k] } else { &mut edge_residual[k] };
            *slot = slot.max(r);
        }
    }
    let integer_spectrum = model
        .eigenspaces
        .iter()
        .filter(|(_, s)| model.is_interior_space(s))
        .all(|(val, s)| {
            let shifted = match model.variant {
                JcVariant::Printed => *val,
                JcVariant::ExcitationNumber => val - 0.5,
            };
            (shifted - shifted.round()).abs() <= 1e-9
                && s.iter().all(|&i| {
                    let level = model.fock_level(i) as f64;
                    let up = i < model.n_max;
                    let expected = match model.variant {
                        JcVariant::Printed => level + if up { 1.0 } else { -1.0 },
                        JcVariant::ExcitationNumber => level + if up { 0.5 } else { -0.5 },
                    };
                    (model.v[(i, i)].re - expected).abs() <= 1e-9
                })
        });

    let interior_spaces: Vec<Vec<usize>> = model
        .eigenspaces
        .iter()
        .filter(|(_, s)| model.is_interior_space(s))
        .map(|(_, s)| s.clone())
        .collect();
    let idx: Vec<usize> = interior_spaces.iter().flatten().copied().collect();
    let local: Vec<Vec<usize>> = {
        let mut at = 0;
        interior_spaces
            .iter()
            .map(|s| {
                let r = (at..at + s.len()).collect();
                at += s.len();
                r
            })
            .collect()
    };
    let algebra = space_algebra(&local)?;
    let compressed: Vec<ComplexMatrix> =
        model.hamiltonians().iter().map(|h| submatrix(h, &idx)).collect();
    let mut affiliation_residual = [0.0f64; 3];
    for (k, h) in compressed.iter().enumerate() {
        affiliation_residual[k] = check_affiliated_with(h, &algebra, tol.affiliation).max_commutator_residual;
    }

    let dim_u_m = algebra.dimension();
    let opts = ClosureOptions { max_dim: Some(dim_u_m + 1), ..ClosureOptions::default() };
    let gens: Vec<ComplexMatrix> = compressed.iter().map(|h| h.scale(I)).collect();
    let basis = lie_closure(&gens, &opts)?;
    let closure_affiliation_residual = basis
        .elements
        .iter()
        .map(|b| check_affiliated_with(b, &algebra, tol.lie_admission).max_commutator_residual)
        .fold(0.0, f64::max);
    let closure_affiliated = closure_affiliation_residual <= tol.lie_admission;
    let commutes = interior_residual.iter().all(|&r| r <= 1e-8);
    Ok(JcSymmetryReport {
        n_max: model.n_max,
        interior_levels: model.interior_levels(),
        variant: model.variant,
        integer_spectrum,
        interior_residual,
        edge_residual,
        commutes,
        affiliation_residual,
        dim: basis.dim(),
        closure_capped: basis.dim() > dim_u_m,
        dim_u_m,
        closure_affiliation_residual,
        closure_affiliated,
        strong_controllable: closure_affiliated && basis.dim() == dim_u_m,
        is_factor: algebra.num_blocks() == 1,
        pure_state_obstruction: algebra.num_blocks() > 1,
    })
}
