//! Dynamical Lie algebras and controllability verdicts.

use serde::{Deserialize, Serialize};

use crate::algebra::{center_and_factor, check_affiliated_with, BlockAlgebra};
use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, C64};
use crate::tolerances::Tolerances;

/// `[A, B] = AB − BA`.
pub fn bracket(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    a.commutator(b)
}

/// Scalar field of a closure.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Field {
    Real,
    Complex,
}

/// Knobs for [`lie_closure`].
#[derive(Debug, Clone)]
pub struct ClosureOptions {
    pub field: Field,
    /// Relative residual a bracket must keep after projection to be admitted.
    pub admission: f64,
    /// Measure inner products on the top-left `m × m` block only.
    pub window: Option<usize>,
    /// Stop once the span reaches this dimension.
    pub max_dim: Option<usize>,
}

impl Default for ClosureOptions {
    fn default() -> Self {
        Self {
            field: Field::Real,
            admission: Tolerances::default().lie_admission,
            window: None,
            max_dim: None,
        }
    }
}

/// Orthonormal basis of a Lie algebra of matrices.
#[derive(Debug, Clone)]
pub struct LieBasis {
    pub elements: Vec<ComplexMatrix>,
    pub field: Field,
    window: Option<usize>,
}

impl LieBasis {
    pub fn dim(&self) -> usize {
        self.elements.len()
    }

    /// Dimension over ℝ: doubled for a complex span.
    pub fn dim_real(&self) -> usize {
        match self.field {
            Field::Real => self.elements.len(),
            Field::Complex => 2 * self.elements.len(),
        }
    }

    fn restrict(&self, a: &ComplexMatrix) -> ComplexMatrix {
        restrict(a, self.window)
    }

    fn inner(&self, a: &ComplexMatrix, b: &ComplexMatrix) -> C64 {
        inner(a, b, self.field, self.window)
    }

    /// Coefficients of the orthogonal projection of `a` onto the span.
    pub fn coordinates(&self, a: &ComplexMatrix) -> Vec<C64> {
        self.elements.iter().map(|b| self.inner(b, a)).collect()
    }

    /// `‖a − P a‖ / ‖a‖`, measured inside the window; zero for `a = 0`.
    pub fn projection_residual(&self, a: &ComplexMatrix) -> f64 {
        let mut r = a.clone();
        for (b, c) in self.elements.iter().zip(self.coordinates(a)) {
            r -= &b.scale(c);
        }
        let norm = self.restrict(a).frobenius_norm();
        if norm == 0.0 {
            0.0
        } else {
            self.restrict(&r).frobenius_norm() / norm
        }
    }

    /// Largest projection residual of `[b_i, b_j]` over all pairs.
    pub fn closure_residual(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.dim() {
            for j in 0..i {
                let c = bracket(&self.elements[i], &self.elements[j]);
                worst = worst.max(self.projection_residual(&c));
            }
        }
        worst
    }
}

fn restrict(a: &ComplexMatrix, window: Option<usize>) -> ComplexMatrix {
    match window {
        Some(m) if m < a.dim() => a.compress(m),
        _ => a.clone(),
    }
}

fn inner(a: &ComplexMatrix, b: &ComplexMatrix, field: Field, window: Option<usize>) -> C64 {
    let z = match window {
        Some(m) if m < a.dim() => a.compress(m).hs_inner(&b.compress(m)),
        _ => a.hs_inner(b),
    };
    match field {
        Field::Real => C64::new(z.re, 0.0),
        Field::Complex => z,
    }
}

/// Smallest real Lie algebra containing skew-Hermitian `gens`.
pub fn generate_lie_algebra(gens: &[ComplexMatrix]) -> Result<LieBasis> {
    lie_closure(gens, &ClosureOptions::default())
}

/// Breadth-first bracket closure with double Gram–Schmidt.
pub fn lie_closure(gens: &[ComplexMatrix], opts: &ClosureOptions) -> Result<LieBasis> {
    let first = gens
        .first()
        .ok_or_else(|| Error::InvalidArgument("at least one generator is required".into()))?;
    let n = first.dim();
    for g in gens {
        if g.dim() != n {
            return Err(Error::DimensionMismatch { expected: n, got: g.dim() });
        }
        if !g.is_finite() {
            return Err(Error::NonFinite { op: "lie_closure" });
        }
    }
    let m = opts.window.unwrap_or(n).min(n);
    let cap = opts.max_dim.unwrap_or(usize::MAX).min(m * m);
    let mut basis = LieBasis { elements: Vec::new(), field: opts.field, window: opts.window };

    let admit = |basis: &mut LieBasis, v: &ComplexMatrix| -> bool {
        let norm = basis.restrict(v).frobenius_norm();
        // A window holding only roundoff of a matrix supported elsewhere is not a direction.
        if norm <= opts.admission * v.frobenius_norm() || basis.dim() >= cap {
            return false;
        }
        let mut r = v.scale_real(1.0 / norm);
        for _ in 0..2 {
            for b in &basis.elements {
                let c = basis.inner(b, &r);
                r -= &b.scale(c);
            }
        }
        let res = basis.restrict(&r).frobenius_norm();
        if res > opts.admission {
            basis.elements.push(r.scale_real(1.0 / res));
            true
        } else {
            false
        }
    };

    for g in gens {
        admit(&mut basis, g);
    }
    let mut k = 0;
    while k < basis.dim() && basis.dim() < cap {
        for j in 0..k {
            let c = bracket(&basis.elements[k], &basis.elements[j]);
            admit(&mut basis, &c);
        }
        k += 1;
    }
    Ok(basis)
}

/// Drift `iV₀`, controls `iV_j`, and the algebra they are affiliated with.
#[derive(Debug, Clone)]
pub struct ControlSystem {
    drift: ComplexMatrix,
    controls: Vec<ComplexMatrix>,
    algebra: BlockAlgebra,
}

impl ControlSystem {
    /// Takes skew-Hermitian drift and controls.
    pub fn new(drift: ComplexMatrix, controls: Vec<ComplexMatrix>, algebra: BlockAlgebra) -> Result<Self> {
        Self::new_with(drift, controls, algebra, &Tolerances::default())
    }

    pub fn new_with(
        drift: ComplexMatrix,
        controls: Vec<ComplexMatrix>,
        algebra: BlockAlgebra,
        tol: &Tolerances,
    ) -> Result<Self> {
        let n = algebra.ambient_dim();
        for (index, op) in std::iter::once(&drift).chain(&controls).enumerate() {
            if op.dim() != n {
                return Err(Error::DimensionMismatch { expected: n, got: op.dim() });
            }
            let skew = op.skew_residual();
            if skew > tol.symmetry * op.frobenius_norm().max(1.0) {
                return Err(Error::NotNormal { op: "ControlSystem::new", residual: skew });
            }
            let cert = check_affiliated_with(op, &algebra, tol.affiliation);
            if !cert.verdict {
                return Err(Error::NotAffiliated { index, residual: cert.max_commutator_residual });
            }
        }
        Ok(Self { drift, controls, algebra })
    }

    /// From Hermitian `V₀, V₁, …`, multiplying each by `i`.
    pub fn from_hamiltonians(v0: &ComplexMatrix, vs: &[ComplexMatrix], algebra: BlockAlgebra) -> Result<Self> {
        let i = C64::new(0.0, 1.0);
        Self::new(v0.scale(i), vs.iter().map(|v| v.scale(i)).collect(), algebra)
    }

    pub fn drift(&self) -> &ComplexMatrix {
        &self.drift
    }

    pub fn controls(&self) -> &[ComplexMatrix] {
        &self.controls
    }

    pub fn algebra(&self) -> &BlockAlgebra {
        &self.algebra
    }

    pub fn dim(&self) -> usize {
        self.algebra.ambient_dim()
    }

    /// `iV₀ + Σ u_j iV_j`.
    pub fn generator(&self, u: &[f64]) -> Result<ComplexMatrix> {
        if u.len() != self.controls.len() {
            return Err(Error::BadControl(format!(
                "expected {} control values, got {}",
                self.controls.len(),
                u.len()
            )));
        }
        let mut g = self.drift.clone();
        for (c, &uj) in self.controls.iter().zip(u) {
            g += &c.scale_real(uj);
        }
        Ok(g)
    }

    pub fn generators(&self) -> Vec<ComplexMatrix> {
        std::iter::once(self.drift.clone()).chain(self.controls.iter().cloned()).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LarcReport {
    pub dim: usize,
    #[serde(rename = "dim_uM")]
    pub dim_u_m: usize,
    pub strong_controllable: bool,
    pub is_factor: bool,
    pub pure_state_obstruction: bool,
    /// Largest affiliation residual over the closure basis.
    pub max_affiliation_residual: f64,
}

/// Compares the dynamical Lie algebra with `u(M)`, of real dimension `Σ n_k²`.
pub fn larc_verdict(sys: &ControlSystem) -> Result<LarcReport> {
    larc_verdict_with(sys, &Tolerances::default())
}

pub fn larc_verdict_with(sys: &ControlSystem, tol: &Tolerances) -> Result<LarcReport> {
    let opts = ClosureOptions { admission: tol.lie_admission, ..ClosureOptions::default() };
    let basis = lie_closure(&sys.generators(), &opts)?;
    let mut worst = 0.0f64;
    for (index, b) in basis.elements.iter().enumerate() {
        let cert = check_affiliated_with(b, &sys.algebra, tol.lie_admission);
        worst = worst.max(cert.max_commutator_residual);
        if !cert.verdict {
            return Err(Error::NotAffiliated { index, residual: cert.max_commutator_residual });
        }
    }
    let dim_u_m = sys.algebra.dimension();
    let factor = center_and_factor(&sys.algebra);
    Ok(LarcReport {
        dim: basis.dim(),
        dim_u_m,
        strong_controllable: basis.dim() == dim_u_m,
        is_factor: factor.is_factor,
        pure_state_obstruction: !factor.is_factor,
        max_affiliation_residual: worst,
    })
}
