use serde::{Deserialize, Serialize};

use super::block::BlockAlgebra;
use crate::error::Result;
use crate::linalg::{eig_hermitian, ComplexMatrix, Symmetry};

/// Right-continuous non-increasing step function `t ↦ μ_t(A)` on `[0, 1)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SingularValueFunction {
    /// `(start, value)` pairs with strictly increasing starts beginning at 0.
    pub steps: Vec<(f64, f64)>,
}

impl SingularValueFunction {
    pub fn value_at(&self, t: f64) -> f64 {
        self.steps
            .iter()
            .take_while(|(start, _)| *start <= t)
            .last()
            .map(|&(_, v)| v)
            .unwrap_or(0.0)
    }

    /// `∫₀¹ μ_t dt`.
    pub fn integral(&self) -> f64 {
        let mut total = 0.0;
        for (i, &(start, v)) in self.steps.iter().enumerate() {
            let end = self.steps.get(i + 1).map(|s| s.0).unwrap_or(1.0);
            total += (end - start) * v;
        }
        total
    }
}

/// Generalized singular numbers: eigenvalues of `|A|` in non-increasing
/// order, each occupying the trace weight of its eigenvector.
pub fn singular_value_function(a: &ComplexMatrix, m: &BlockAlgebra) -> Result<SingularValueFunction> {
    m.require_member(a, "singular_value_function")?;
    let mut pieces: Vec<(f64, f64)> = Vec::new();
    for (k, part) in m.extract_blocks(a).iter().enumerate() {
        let gram = &part.adjoint() * part;
        let s = eig_hermitian(&gram, Symmetry::Hermitian)?;
        let w = m.weights()[k] / m.blocks()[k].size as f64;
        for &l in &s.eigenvalues {
            pieces.push((l.max(0.0).sqrt(), w));
        }
    }
    pieces.sort_by(|x, y| y.0.total_cmp(&x.0));
    let mut steps: Vec<(f64, f64)> = Vec::new();
    let mut t = 0.0;
    for (value, width) in pieces {
        match steps.last() {
            Some(&(_, v)) if (v - value).abs() <= 1e-14 * v.max(1.0) => {}
            _ => steps.push((t, value)),
        }
        t += width;
    }
    Ok(SingularValueFunction { steps })
}
