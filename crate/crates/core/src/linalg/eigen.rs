//! Cyclic Jacobi diagonalization of Hermitian and skew-Hermitian matrices
//! plus the functional calculus built on it.

use super::matrix::{ComplexMatrix, C64, I, ZERO};
use crate::error::{Error, Result};
use crate::tolerances::Tolerances;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Symmetry {
    Hermitian,
    /// Eigenvalues are stored as ω where the true eigenvalue is iω.
    SkewHermitian,
}

/// `A = U diag(λ) U*` (Hermitian) or `A = U diag(iω) U*` (skew-Hermitian).
#[derive(Debug, Clone)]
pub struct SpectralDecomposition {
    pub symmetry: Symmetry,
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    /// Columns are orthonormal eigenvectors, in eigenvalue order.
    pub unitary: ComplexMatrix,
}

impl SpectralDecomposition {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// The eigenvalue of the original matrix (iω for skew input).
    pub fn eigenvalue(&self, k: usize) -> C64 {
        match self.symmetry {
            Symmetry::Hermitian => C64::new(self.eigenvalues[k], 0.0),
            Symmetry::SkewHermitian => I * self.eigenvalues[k],
        }
    }

    pub fn eigenvector(&self, k: usize) -> Vec<C64> {
        self.unitary.column(k)
    }

    /// `U diag(d) U*`.
    pub fn synthesize(&self, d: &[C64]) -> ComplexMatrix {
        let n = self.dim();
        let u = &self.unitary;
        let scaled = ComplexMatrix::from_fn(n, |i, j| u[(i, j)] * d[j]);
        &scaled * &u.adjoint()
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        let d: Vec<C64> = (0..self.dim()).map(|k| self.eigenvalue(k)).collect();
        self.synthesize(&d)
    }

    /// Groups eigenvalue indices whose consecutive gaps are below
    /// `rel_gap · max(1, spread)`.
    pub fn clusters(&self, rel_gap: f64) -> Vec<Vec<usize>> {
        cluster_sorted(&self.eigenvalues, rel_gap)
    }

    /// Orthogonal projector onto the span of the listed eigenvectors.
    pub fn projector(&self, indices: &[usize]) -> ComplexMatrix {
        let n = self.dim();
        let mut p = ComplexMatrix::zeros(n);
        for &k in indices {
            let v = self.eigenvector(k);
            p += &ComplexMatrix::outer(&v, &v);
        }
        p
    }
}

pub(crate) fn cluster_sorted(values: &[f64], rel_gap: f64) -> Vec<Vec<usize>> {
    if values.is_empty() {
        return Vec::new();
    }
    let scale = values
        .iter()
        .map(|v| v.abs())
        .fold(0.0, f64::max)
        .max(values[values.len() - 1] - values[0])
        .max(1.0);
    let mut out = vec![vec![0]];
    for k in 1..values.len() {
        if values[k] - values[k - 1] <= rel_gap * scale {
            out.last_mut().unwrap().push(k);
        } else {
            out.push(vec![k]);
        }
    }
    out
}

pub fn eig_hermitian(a: &ComplexMatrix, symmetry: Symmetry) -> Result<SpectralDecomposition> {
    eig_hermitian_with(a, symmetry, &Tolerances::default())
}

pub fn eig_hermitian_with(
    a: &ComplexMatrix,
    symmetry: Symmetry,
    tol: &Tolerances,
) -> Result<SpectralDecomposition> {
    let n = a.dim();
    if n == 0 {
        return Err(Error::InvalidArgument("eig_hermitian: empty matrix".into()));
    }
    if !a.is_finite() {
        return Err(Error::NonFinite { op: "eig_hermitian" });
    }
    let scale = a.frobenius_norm();
    let residual = match symmetry {
        Symmetry::Hermitian => a.hermitian_residual(),
        Symmetry::SkewHermitian => a.skew_residual(),
    };
    if residual > tol.symmetry * scale.max(1.0) {
        return Err(Error::NotNormal { op: "eig_hermitian", residual });
    }
    // Work on the Hermitian form; skew input is rotated by −i.
    let h = match symmetry {
        Symmetry::Hermitian => a.hermitian_part(),
        Symmetry::SkewHermitian => a.scale(-I).hermitian_part(),
    };
    let (mut values, vectors) = jacobi(h, tol)?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| values[i].total_cmp(&values[j]));
    let sorted: Vec<f64> = order.iter().map(|&k| values[k]).collect();
    let unitary = ComplexMatrix::from_fn(n, |i, j| vectors[(i, order[j])]);
    values = sorted;
    Ok(SpectralDecomposition { symmetry, eigenvalues: values, unitary })
}

fn offdiag_norm(a: &ComplexMatrix) -> f64 {
    let n = a.dim();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// Cyclic complex Jacobi. Returns unsorted eigenvalues and eigenvector columns.
fn jacobi(mut a: ComplexMatrix, tol: &Tolerances) -> Result<(Vec<f64>, ComplexMatrix)> {
    let n = a.dim();
    let mut v = ComplexMatrix::identity(n);
    let target = tol.jacobi_offdiag * a.frobenius_norm();
    let mut converged = n == 1 || offdiag_norm(&a) <= target;
    let mut sweeps = 0;
    while !converged {
        if sweeps >= tol.jacobi_max_sweeps {
            return Err(Error::NoConvergence { op: "eig_hermitian", iterations: sweeps });
        }
        sweeps += 1;
        for p in 0..n - 1 {
            for q in p + 1..n {
                let apq = a[(p, q)];
                let mag = apq.norm();
                if mag == 0.0 {
                    continue;
                }
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                // Below working precision relative to both diagonals: drop.
                if sweeps > 4
                    && app.abs() + 100.0 * mag == app.abs()
                    && aqq.abs() + 100.0 * mag == aqq.abs()
                {
                    a[(p, q)] = ZERO;
                    a[(q, p)] = ZERO;
                    continue;
                }
                let phase = apq / mag;
                let zeta = (aqq - app) / (2.0 * mag);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let t = if zeta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                // G = diag(1, conj(phase)) · [[c, s], [-s, c]]
                let g00 = C64::new(c, 0.0);
                let g01 = C64::new(s, 0.0);
                let g10 = -phase.conj() * s;
                let g11 = phase.conj() * c;
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = akp * g00 + akq * g10;
                    a[(k, q)] = akp * g01 + akq * g11;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = g00.conj() * apk + g10.conj() * aqk;
                    a[(q, k)] = g01.conj() * apk + g11.conj() * aqk;
                }
                a[(p, q)] = ZERO;
                a[(q, p)] = ZERO;
                a[(p, p)] = C64::new(a[(p, p)].re, 0.0);
                a[(q, q)] = C64::new(a[(q, q)].re, 0.0);
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = vkp * g00 + vkq * g10;
                    v[(k, q)] = vkp * g01 + vkq * g11;
                }
            }
        }
        converged = offdiag_norm(&a) <= target;
    }
    Ok(((0..n).map(|i| a[(i, i)].re).collect(), v))
}

/// `U diag(f(λ_k)) U*`. `f` receives the stored real eigenvalue (ω for skew input).
pub fn apply_spectral_function(
    s: &SpectralDecomposition,
    f: impl Fn(f64) -> C64,
) -> Result<ComplexMatrix> {
    let mut d = Vec::with_capacity(s.dim());
    for &lam in &s.eigenvalues {
        let v = f(lam);
        if !(v.re.is_finite() && v.im.is_finite()) {
            return Err(Error::DomainError { op: "apply_spectral_function", at: lam });
        }
        d.push(v);
    }
    Ok(s.synthesize(&d))
}

/// `e^A` for skew-Hermitian `A`, through the spectral decomposition.
pub fn expm_skew(a: &ComplexMatrix) -> Result<ComplexMatrix> {
    let s = eig_hermitian(a, Symmetry::SkewHermitian)?;
    apply_spectral_function(&s, |w| (I * w).exp())
}

/// `e^{tH}` for Hermitian `H` (not unitary in general).
pub fn expm_hermitian(h: &ComplexMatrix, t: f64) -> Result<ComplexMatrix> {
    let s = eig_hermitian(h, Symmetry::Hermitian)?;
    apply_spectral_function(&s, |l| C64::new((t * l).exp(), 0.0))
}
