//! Truncated Koopman models of linear flows `x ↦ x + tα` on the torus `𝕋ᵈ`.
//!
//! On the Fourier mode `e^{iξ·x}` the Koopman group acts by the phase
//! `e^{it(α·ξ)}`, so with the sharp cutoff `|ξ_j| ≤ K` every object here is
//! diagonal in the mode basis.

use serde::{Deserialize, Serialize};

use crate::algebra::{bicommutant_algebra, conditional_expectation, BlockAlgebra, ConditionalExpectation, Partition};
use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, C64};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "TorusModelJson", into = "TorusModelJson")]
pub struct TorusModel {
    d: usize,
    alpha: Vec<f64>,
    k: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct TorusModelJson {
    d: usize,
    alpha: Vec<f64>,
    #[serde(rename = "K")]
    k: usize,
}

impl TryFrom<TorusModelJson> for TorusModel {
    type Error = Error;

    fn try_from(j: TorusModelJson) -> Result<Self> {
        build_torus_model(j.d, j.alpha, j.k)
    }
}

impl From<TorusModel> for TorusModelJson {
    fn from(m: TorusModel) -> Self {
        Self { d: m.d, alpha: m.alpha, k: m.k }
    }
}

pub fn build_torus_model(d: usize, alpha: Vec<f64>, k: usize) -> Result<TorusModel> {
    if k < 1 {
        return Err(Error::BadCutoff(format!("Fourier cutoff K must be at least 1, got {k}")));
    }
    if d < 1 {
        return Err(Error::InvalidArgument("torus dimension must be at least 1".into()));
    }
    if alpha.len() != d {
        return Err(Error::DimensionMismatch { expected: d, got: alpha.len() });
    }
    if alpha.iter().any(|a| !a.is_finite()) {
        return Err(Error::NonFinite { op: "build_torus_model" });
    }
    Ok(TorusModel { d, alpha, k })
}

impl TorusModel {
    pub fn d(&self) -> usize {
        self.d
    }

    pub fn alpha(&self) -> &[f64] {
        &self.alpha
    }

    pub fn cutoff(&self) -> usize {
        self.k
    }

    pub fn ambient_dim(&self) -> usize {
        (2 * self.k + 1).pow(self.d as u32)
    }

    /// Lexicographic position of the multi-index `ξ`.
    pub fn index_of(&self, xi: &[i64]) -> Option<usize> {
        if xi.len() != self.d {
            return None;
        }
        let side = 2 * self.k as i64 + 1;
        let mut idx = 0i64;
        for &x in xi {
            if x.abs() > self.k as i64 {
                return None;
            }
            idx = idx * side + x + self.k as i64;
        }
        Some(idx as usize)
    }

    pub fn multi_index(&self, mut idx: usize) -> Vec<i64> {
        let side = 2 * self.k + 1;
        let mut xi = vec![0i64; self.d];
        for j in (0..self.d).rev() {
            xi[j] = (idx % side) as i64 - self.k as i64;
            idx /= side;
        }
        xi
    }

    /// `α·ξ` for every mode, in index order.
    pub fn frequencies(&self) -> Vec<f64> {
        (0..self.ambient_dim())
            .map(|i| self.multi_index(i).iter().zip(&self.alpha).map(|(&x, a)| x as f64 * a).sum())
            .collect()
    }

    /// The mode algebra `ℓ^∞` of the retained modes with the uniform trace.
    pub fn diagonal_algebra(&self) -> BlockAlgebra {
        BlockAlgebra::diagonal(self.ambient_dim())
    }
}

/// The Stone generator `diag(i α·ξ)`.
pub fn generator(model: &TorusModel) -> ComplexMatrix {
    let d: Vec<C64> = model.frequencies().into_iter().map(|w| C64::new(0.0, w)).collect();
    ComplexMatrix::from_diag(&d)
}

/// `U^t = diag(e^{it α·ξ})`.
pub fn koopman_unitary(model: &TorusModel, t: f64) -> ComplexMatrix {
    let d: Vec<C64> = model.frequencies().into_iter().map(|w| C64::new(0.0, t * w).exp()).collect();
    ComplexMatrix::from_diag(&d)
}

/// Samples `{1, √2}` scaled so every phase `t α·ξ` stays in `[−√2, √2]`.
pub fn default_samples(model: &TorusModel) -> Vec<f64> {
    let top = model.frequencies().iter().fold(0.0f64, |m, w| m.max(w.abs()));
    let scale = if top > 0.0 { 1.0 / top } else { 1.0 };
    vec![scale, 2f64.sqrt() * scale]
}

/// Whether some pair of distinct frequencies gets identical phases at every sample.
fn phases_collide(freqs: &[f64], samples: &[f64]) -> bool {
    let scale = freqs.iter().fold(1.0f64, |m, w| m.max(w.abs()));
    for (a, wa) in freqs.iter().enumerate() {
        for wb in &freqs[a + 1..] {
            if (wa - wb).abs() <= 1e-9 * scale {
                continue;
            }
            let same = samples.iter().all(|t| {
                let p = C64::new(0.0, t * wa).exp() - C64::new(0.0, t * wb).exp();
                p.norm() <= 1e-9
            });
            if same {
                return true;
            }
        }
    }
    false
}

/// `{U^t : t ∈ samples}''`.
pub fn koopman_algebra(model: &TorusModel, t_samples: &[f64]) -> Result<BlockAlgebra> {
    if t_samples.is_empty() {
        return Err(Error::InvalidArgument("at least one time sample is required".into()));
    }
    let unitaries: Vec<ComplexMatrix> = t_samples.iter().map(|&t| koopman_unitary(model, t)).collect();
    bicommutant_algebra(&unitaries)
}

/// [`koopman_algebra`] on [`default_samples`], shrunk while phases collide mod 2π.
pub fn koopman_algebra_default(model: &TorusModel) -> Result<BlockAlgebra> {
    let freqs = model.frequencies();
    let mut samples = default_samples(model);
    for _ in 0..8 {
        if !phases_collide(&freqs, &samples) {
            break;
        }
        log::info!("phase collision at samples {samples:?}; halving");
        samples.iter_mut().for_each(|t| *t *= 0.5);
    }
    koopman_algebra(model, &samples)
}

/// Averaging over the cells of a partition of the modes.
pub fn filtration_expectation(model: &TorusModel, cells: Vec<Vec<usize>>) -> Result<ConditionalExpectation> {
    conditional_expectation(&model.diagonal_algebra(), &Partition::Merge(cells))
}

/// Contiguous cells of `size` indices over `0..n`, the last possibly shorter.
pub fn contiguous_cells(n: usize, size: usize) -> Vec<Vec<usize>> {
    let size = size.max(1);
    (0..n).collect::<Vec<_>>().chunks(size).map(|c| c.to_vec()).collect()
}

/// Cells aligned with the spectrum of the generator: zero-frequency modes
/// form one cell, and the positive and negative modes, each ordered by
/// `|α·ξ|`, are cut into contiguous cells of `size`.
pub fn spectral_cells(model: &TorusModel, size: usize) -> Vec<Vec<usize>> {
    let freqs = model.frequencies();
    let top = freqs.iter().fold(0.0f64, |m, w| m.max(w.abs()));
    let zero = 1e-12 * top.max(1.0);
    let mut kernel = Vec::new();
    let mut pos = Vec::new();
    let mut neg = Vec::new();
    for (i, &w) in freqs.iter().enumerate() {
        if w.abs() <= zero {
            kernel.push(i);
        } else if w > 0.0 {
            pos.push(i);
        } else {
            neg.push(i);
        }
    }
    let by_magnitude = |v: &mut Vec<usize>| v.sort_by(|&a, &b| freqs[a].abs().total_cmp(&freqs[b].abs()).then(a.cmp(&b)));
    by_magnitude(&mut pos);
    by_magnitude(&mut neg);
    let size = size.max(1);
    let mut cells = Vec::new();
    if !kernel.is_empty() {
        cells.push(kernel);
    }
    for side in [neg, pos] {
        cells.extend(side.chunks(size).map(|c| c.to_vec()));
    }
    cells
}

/// Dyadic refinement chain of [`spectral_cells`] with sizes `2^{levels−1}, …, 2`,
/// closed by the identity.
pub fn dyadic_chain(model: &TorusModel, levels: usize) -> Result<Vec<ConditionalExpectation>> {
    let n = model.ambient_dim();
    let mut chain = (1..levels)
        .rev()
        .map(|l| filtration_expectation(model, spectral_cells(model, 1 << l)))
        .collect::<Result<Vec<_>>>()?;
    if levels > 0 {
        chain.push(filtration_expectation(model, contiguous_cells(n, 1))?);
    }
    Ok(chain)
}
