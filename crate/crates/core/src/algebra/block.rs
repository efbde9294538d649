//! Block-diagonal surrogates `⊕_k M_{n_k} ⊗ I_{m_k}` for finite von Neumann
//! algebras, with a normalized weighted trace.
//!
//! Canonical coordinates order the ambient basis by block, then internal
//! index, then multiplicity index: canonical index `o_k + a·m_k + r`. The
//! basis map sends canonical index `c` to ambient coordinate `perm[c]`; an
//! optional unitary frame replaces the permutation when the block structure
//! lives in a rotated basis.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, MatrixJson, C64, ONE, ZERO};
use crate::tolerances::Tolerances;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Block {
    pub size: usize,
    pub multiplicity: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BlockAlgebra {
    blocks: Vec<Block>,
    weights: Vec<f64>,
    perm: Vec<usize>,
    frame: Option<ComplexMatrix>,
    offsets: Vec<usize>,
    ambient_dim: usize,
}

impl BlockAlgebra {
    pub fn new(blocks: Vec<(usize, usize)>, weights: Vec<f64>, perm: Vec<usize>) -> Result<Self> {
        Self::new_with(blocks, weights, perm, &Tolerances::default())
    }

    pub fn new_with(
        blocks: Vec<(usize, usize)>,
        weights: Vec<f64>,
        perm: Vec<usize>,
        tol: &Tolerances,
    ) -> Result<Self> {
        let blocks: Vec<Block> =
            blocks.into_iter().map(|(size, multiplicity)| Block { size, multiplicity }).collect();
        if blocks.is_empty() || blocks.iter().any(|b| b.size == 0 || b.multiplicity == 0) {
            return Err(Error::InvalidArgument("blocks must be nonempty with positive sizes".into()));
        }
        if weights.len() != blocks.len() {
            return Err(Error::BadWeights(format!(
                "{} weights for {} blocks",
                weights.len(),
                blocks.len()
            )));
        }
        if weights.iter().any(|&w| !(w > 0.0 && w.is_finite())) {
            return Err(Error::BadWeights("weights must be positive and finite".into()));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > tol.weight_sum {
            return Err(Error::BadWeights(format!("weights sum to {total}, not 1")));
        }
        let mut offsets = Vec::with_capacity(blocks.len());
        let mut ambient_dim = 0;
        for b in &blocks {
            offsets.push(ambient_dim);
            ambient_dim += b.size * b.multiplicity;
        }
        if perm.len() != ambient_dim {
            return Err(Error::BadPermutation(format!(
                "length {} but ambient dimension {ambient_dim}",
                perm.len()
            )));
        }
        let mut seen = vec![false; ambient_dim];
        for &p in &perm {
            if p >= ambient_dim || seen[p] {
                return Err(Error::BadPermutation(format!("entry {p} repeated or out of range")));
            }
            seen[p] = true;
        }
        Ok(Self { blocks, weights, perm, frame: None, offsets, ambient_dim })
    }

    /// Block structure carried by the columns of a unitary `frame`.
    pub fn with_frame(
        blocks: Vec<(usize, usize)>,
        weights: Vec<f64>,
        frame: ComplexMatrix,
    ) -> Result<Self> {
        let n = frame.dim();
        let mut alg = Self::new(blocks, weights, (0..n).collect())?;
        let defect = (&(&frame.adjoint() * &frame) - &ComplexMatrix::identity(n)).max_abs();
        if defect > 1e-9 {
            return Err(Error::InvalidArgument(format!("frame is not unitary ({defect:.3e})")));
        }
        alg.frame = Some(frame);
        Ok(alg)
    }

    /// Weights proportional to the ambient dimension each block occupies.
    pub fn uniform_weights(blocks: &[(usize, usize)]) -> Vec<f64> {
        let total: usize = blocks.iter().map(|(n, m)| n * m).sum();
        blocks.iter().map(|(n, m)| (n * m) as f64 / total as f64).collect()
    }

    pub fn with_uniform_weights(blocks: Vec<(usize, usize)>) -> Result<Self> {
        let w = Self::uniform_weights(&blocks);
        let n = blocks.iter().map(|(a, b)| a * b).sum();
        Self::new(blocks, w, (0..n).collect())
    }

    /// All of `M_n`.
    pub fn full(n: usize) -> Self {
        Self::with_uniform_weights(vec![(n, 1)]).expect("valid full algebra")
    }

    /// Diagonal algebra `ℓ∞(n)` with uniform weights.
    pub fn diagonal(n: usize) -> Self {
        Self::with_uniform_weights(vec![(1, 1); n]).expect("valid diagonal algebra")
    }

    /// Scalars `ℂ I_n`.
    pub fn scalars(n: usize) -> Self {
        Self::with_uniform_weights(vec![(1, n)]).expect("valid scalar algebra")
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn block_pairs(&self) -> Vec<(usize, usize)> {
        self.blocks.iter().map(|b| (b.size, b.multiplicity)).collect()
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn perm(&self) -> &[usize] {
        &self.perm
    }

    pub fn frame(&self) -> Option<&ComplexMatrix> {
        self.frame.as_ref()
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    /// `dim_ℂ M = Σ n_k²`, which is also `dim_ℝ u(M)`.
    pub fn dimension(&self) -> usize {
        self.blocks.iter().map(|b| b.size * b.size).sum()
    }

    pub fn commutant_dimension(&self) -> usize {
        self.blocks.iter().map(|b| b.multiplicity * b.multiplicity).sum()
    }

    /// Sorted `(size, multiplicity)` multiset, convenient for comparisons.
    pub fn sorted_blocks(&self) -> Vec<(usize, usize)> {
        let mut b = self.block_pairs();
        b.sort_unstable();
        b
    }

    pub fn canonical_index(&self, block: usize, internal: usize, copy: usize) -> usize {
        self.offsets[block] + internal * self.blocks[block].multiplicity + copy
    }

    /// Ambient vector of canonical basis element `c`.
    pub fn canonical_vector(&self, c: usize) -> Vec<C64> {
        match &self.frame {
            Some(f) => f.column(c),
            None => {
                let mut v = vec![ZERO; self.ambient_dim];
                v[self.perm[c]] = ONE;
                v
            }
        }
    }

    /// `W* A W`: the operator in canonical coordinates.
    pub fn to_canonical(&self, a: &ComplexMatrix) -> ComplexMatrix {
        match &self.frame {
            Some(f) => a.conjugate_by(f),
            None => ComplexMatrix::from_fn(self.ambient_dim, |i, j| a[(self.perm[i], self.perm[j])]),
        }
    }

    /// `W Ã W*`.
    pub fn from_canonical(&self, a: &ComplexMatrix) -> ComplexMatrix {
        match &self.frame {
            Some(f) => a.conjugate_by(&f.adjoint()),
            None => {
                let mut out = ComplexMatrix::zeros(self.ambient_dim);
                for i in 0..self.ambient_dim {
                    for j in 0..self.ambient_dim {
                        out[(self.perm[i], self.perm[j])] = a[(i, j)];
                    }
                }
                out
            }
        }
    }

    /// The `A_k` of the nearest member `⊕ A_k ⊗ I`, averaging over copies.
    pub fn extract_blocks(&self, a: &ComplexMatrix) -> Vec<ComplexMatrix> {
        let c = self.to_canonical(a);
        self.extract_canonical(&c)
    }

    fn extract_canonical(&self, c: &ComplexMatrix) -> Vec<ComplexMatrix> {
        self.blocks
            .iter()
            .enumerate()
            .map(|(k, b)| {
                let m = b.multiplicity;
                ComplexMatrix::from_fn(b.size, |i, j| {
                    let s: C64 = (0..m)
                        .map(|r| c[(self.canonical_index(k, i, r), self.canonical_index(k, j, r))])
                        .sum();
                    s / m as f64
                })
            })
            .collect()
    }

    /// `W (⊕ A_k ⊗ I_{m_k}) W*`.
    pub fn assemble(&self, parts: &[ComplexMatrix]) -> ComplexMatrix {
        assert_eq!(parts.len(), self.blocks.len(), "one matrix per block");
        let mut c = ComplexMatrix::zeros(self.ambient_dim);
        for (k, (b, p)) in self.blocks.iter().zip(parts).enumerate() {
            assert_eq!(p.dim(), b.size, "block {k} has the wrong size");
            for i in 0..b.size {
                for j in 0..b.size {
                    for r in 0..b.multiplicity {
                        c[(self.canonical_index(k, i, r), self.canonical_index(k, j, r))] = p[(i, j)];
                    }
                }
            }
        }
        self.from_canonical(&c)
    }

    /// Hilbert–Schmidt orthogonal projection onto the algebra.
    pub fn project(&self, a: &ComplexMatrix) -> ComplexMatrix {
        self.assemble(&self.extract_blocks(a))
    }

    /// `‖A − P(A)‖_F / ‖A‖_F` (zero for the zero matrix).
    pub fn membership_residual(&self, a: &ComplexMatrix) -> f64 {
        let norm = a.frobenius_norm();
        if norm == 0.0 {
            return 0.0;
        }
        (a - &self.project(a)).frobenius_norm() / norm
    }

    pub fn is_member(&self, a: &ComplexMatrix, tol: f64) -> bool {
        a.dim() == self.ambient_dim && self.membership_residual(a) <= tol
    }

    pub(crate) fn require_member(&self, a: &ComplexMatrix, op: &'static str) -> Result<()> {
        a.check_same_dim(&ComplexMatrix::zeros(self.ambient_dim))
            .map_err(|_| Error::DimensionMismatch { expected: self.ambient_dim, got: a.dim() })?;
        let residual = self.membership_residual(a);
        if residual > Tolerances::default().affiliation {
            return Err(Error::NotMember { op, residual });
        }
        Ok(())
    }

    /// Matrix units `E_ab ⊗ I_{m_k}` of every block: a linear basis of the algebra.
    pub fn generators(&self) -> Vec<ComplexMatrix> {
        let mut out = Vec::new();
        for (k, b) in self.blocks.iter().enumerate() {
            for a in 0..b.size {
                for c in 0..b.size {
                    let parts: Vec<ComplexMatrix> = self
                        .blocks
                        .iter()
                        .enumerate()
                        .map(|(j, bj)| {
                            let mut m = ComplexMatrix::zeros(bj.size);
                            if j == k {
                                m[(a, c)] = ONE;
                            }
                            m
                        })
                        .collect();
                    out.push(self.assemble(&parts));
                }
            }
        }
        out
    }

    /// Hilbert–Schmidt orthonormal basis of the algebra.
    pub fn orthonormal_basis(&self) -> Vec<ComplexMatrix> {
        let mut out = Vec::new();
        for (k, b) in self.blocks.iter().enumerate() {
            let s = 1.0 / (b.multiplicity as f64).sqrt();
            for a in 0..b.size {
                for c in 0..b.size {
                    let mut canon = ComplexMatrix::zeros(self.ambient_dim);
                    for r in 0..b.multiplicity {
                        canon[(self.canonical_index(k, a, r), self.canonical_index(k, c, r))] =
                            C64::new(s, 0.0);
                    }
                    out.push(self.from_canonical(&canon));
                }
            }
        }
        out
    }

    /// Matrix units `I_{n_k} ⊗ E_rs` spanning the commutant.
    pub fn commutant_generators(&self) -> Vec<ComplexMatrix> {
        let mut out = Vec::new();
        for (k, b) in self.blocks.iter().enumerate() {
            for r in 0..b.multiplicity {
                for s in 0..b.multiplicity {
                    let mut canon = ComplexMatrix::zeros(self.ambient_dim);
                    for a in 0..b.size {
                        canon[(self.canonical_index(k, a, r), self.canonical_index(k, a, s))] = ONE;
                    }
                    out.push(self.from_canonical(&canon));
                }
            }
        }
        out
    }

    /// Maximum over commutant matrix units `G` of `‖[A, G]‖_F / (‖A‖_F ‖G‖_F)`.
    pub fn commutant_residual(&self, a: &ComplexMatrix) -> f64 {
        let norm = a.frobenius_norm();
        if norm == 0.0 {
            return 0.0;
        }
        let c = self.to_canonical(a);
        let n = self.ambient_dim;
        let mut worst = 0.0f64;
        for (k, b) in self.blocks.iter().enumerate() {
            let m = b.multiplicity;
            let lo = self.offsets[k];
            let hi = lo + b.size * m;
            for r in 0..m {
                for s in 0..m {
                    // [Ã, I⊗E_rs]: columns lo+a·m+s receive Ã[:, lo+a·m+r],
                    // rows lo+a·m+r lose Ã[lo+a·m+s, :].
                    let in_rows = |i: usize| i >= lo && i < hi && (i - lo) % m == r;
                    let mut sq = 0.0;
                    for a_col in 0..b.size {
                        let col = lo + a_col * m + s;
                        let src = lo + a_col * m + r;
                        for i in 0..n {
                            let mut v = c[(i, src)];
                            if in_rows(i) {
                                let a_row = (i - lo) / m;
                                v -= c[(lo + a_row * m + s, col)];
                            }
                            sq += v.norm_sqr();
                        }
                    }
                    let in_cols = |j: usize| j >= lo && j < hi && (j - lo) % m == s;
                    for a_row in 0..b.size {
                        let src_row = lo + a_row * m + s;
                        for j in 0..n {
                            if !in_cols(j) {
                                sq += c[(src_row, j)].norm_sqr();
                            }
                        }
                    }
                    let g_norm = (b.size as f64).sqrt();
                    worst = worst.max(sq.sqrt() / (norm * g_norm));
                }
            }
        }
        worst
    }

    /// `τ(A) = Σ_k c_k tr(A_k)/n_k` for members.
    pub fn trace_of(&self, a: &ComplexMatrix) -> Result<C64> {
        self.require_member(a, "trace_of")?;
        Ok(self.trace_unchecked(a))
    }

    pub(crate) fn trace_unchecked(&self, a: &ComplexMatrix) -> C64 {
        self.trace_of_blocks(&self.extract_blocks(a))
    }

    pub(crate) fn trace_of_blocks(&self, parts: &[ComplexMatrix]) -> C64 {
        parts
            .iter()
            .zip(&self.blocks)
            .zip(&self.weights)
            .map(|((p, b), &w)| p.trace() * (w / b.size as f64))
            .sum()
    }

    /// Projection onto the k-th central summand.
    pub fn central_projection(&self, k: usize) -> ComplexMatrix {
        let parts: Vec<ComplexMatrix> = self
            .blocks
            .iter()
            .enumerate()
            .map(|(j, b)| {
                if j == k {
                    ComplexMatrix::identity(b.size)
                } else {
                    ComplexMatrix::zeros(b.size)
                }
            })
            .collect();
        self.assemble(&parts)
    }
}

/// Wire form `{"blocks": [[n,m],...], "weights": [...], "perm": [...]}`,
/// with an optional `"frame"` matrix when the basis is not a permutation.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BlockAlgebraJson {
    pub blocks: Vec<[usize; 2]>,
    pub weights: Vec<f64>,
    pub perm: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub frame: Option<MatrixJson>,
}

impl From<&BlockAlgebra> for BlockAlgebraJson {
    fn from(a: &BlockAlgebra) -> Self {
        Self {
            blocks: a.blocks.iter().map(|b| [b.size, b.multiplicity]).collect(),
            weights: a.weights.clone(),
            perm: a.perm.clone(),
            frame: a.frame.as_ref().map(MatrixJson::from),
        }
    }
}

impl TryFrom<BlockAlgebraJson> for BlockAlgebra {
    type Error = Error;
    fn try_from(j: BlockAlgebraJson) -> Result<Self> {
        let blocks: Vec<(usize, usize)> = j.blocks.iter().map(|b| (b[0], b[1])).collect();
        match j.frame {
            None => BlockAlgebra::new(blocks, j.weights, j.perm),
            Some(f) => {
                let frame = ComplexMatrix::try_from(f)?;
                let perm_ok = j.perm.iter().enumerate().all(|(i, &p)| i == p);
                if !perm_ok {
                    return Err(Error::BadPermutation("frame requires the identity perm".into()));
                }
                BlockAlgebra::with_frame(blocks, j.weights, frame)
            }
        }
    }
}

impl Serialize for BlockAlgebra {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        BlockAlgebraJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for BlockAlgebra {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        BlockAlgebra::try_from(BlockAlgebraJson::deserialize(d)?).map_err(serde::de::Error::custom)
    }
}
