//! Commutants, bicommutants and the factor test.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::block::BlockAlgebra;
use crate::error::{Error, Result};
use crate::linalg::nullspace::gram_null_vectors;
use crate::linalg::{
    apply_spectral_function, eig_hermitian_with, ComplexMatrix, Symmetry, C64, ZERO,
};
use crate::tolerances::Tolerances;

const MIXING_SEED: u64 = 0x7a3c_55e1;

fn gaussian(rng: &mut ChaCha8Rng) -> f64 {
    StandardNormal.sample(rng)
}

/// Random real combination of the Hermitian and anti-Hermitian parts of `ops`.
fn generic_hermitian(ops: &[ComplexMatrix], n: usize, rng: &mut ChaCha8Rng) -> ComplexMatrix {
    let mut h = ComplexMatrix::zeros(n);
    for a in ops {
        let herm = a.hermitian_part();
        let anti = (a - &a.adjoint()).scale(C64::new(0.0, -0.5));
        h += &herm.scale_real(gaussian(rng));
        h += &anti.scale_real(gaussian(rng));
    }
    h
}

fn check_dims(s: &[ComplexMatrix]) -> Result<usize> {
    let n = s.first().map(|a| a.dim()).ok_or_else(|| {
        Error::InvalidArgument("commutant of an empty set needs a dimension".into())
    })?;
    for a in s {
        if a.dim() != n {
            return Err(Error::DimensionMismatch { expected: n, got: a.dim() });
        }
    }
    Ok(n)
}

/// Hilbert–Schmidt orthonormal basis of `{X : XA = AX, XA* = A*X ∀A ∈ S}`.
pub fn commutant(s: &[ComplexMatrix]) -> Result<Vec<ComplexMatrix>> {
    commutant_with(s, &Tolerances::default())
}

pub fn commutant_with(s: &[ComplexMatrix], tol: &Tolerances) -> Result<Vec<ComplexMatrix>> {
    let n = check_dims(s)?;
    let mut constraints = Vec::new();
    for a in s {
        let norm = a.frobenius_norm();
        if norm == 0.0 {
            continue;
        }
        let a = a.scale_real(1.0 / norm);
        let sym = a.hermitian_residual().min(a.skew_residual());
        if sym > 1e-14 {
            constraints.push(a.adjoint());
        }
        constraints.push(a);
    }
    // Any X in the commutant commutes with a generic Hermitian H built from S,
    // so X is block-diagonal over H's eigenspaces. Search only that subspace.
    let mut rng = ChaCha8Rng::seed_from_u64(MIXING_SEED);
    let h = generic_hermitian(&constraints, n, &mut rng);
    let spec = eig_hermitian_with(&h, Symmetry::Hermitian, tol)?;
    let clusters = spec.clusters(tol.cluster_gap);
    let u = &spec.unitary;
    let tilde: Vec<ComplexMatrix> = constraints.iter().map(|a| a.conjugate_by(u)).collect();

    let params: Vec<(usize, usize)> = clusters
        .iter()
        .flat_map(|c| c.iter().flat_map(move |&a| c.iter().map(move |&b| (a, b))))
        .collect();
    let p = params.len();
    // Column i of L stacks vec([e_a e_b*, Ã]) over all constraints.
    let cols: Vec<Vec<C64>> = params
        .iter()
        .map(|&(a, b)| {
            let mut col = Vec::with_capacity(tilde.len() * n * n);
            for t in &tilde {
                for i in 0..n {
                    for j in 0..n {
                        let mut v = ZERO;
                        if i == a {
                            v += t[(b, j)];
                        }
                        if j == b {
                            v -= t[(i, a)];
                        }
                        col.push(v);
                    }
                }
            }
            col
        })
        .collect();
    let gram = ComplexMatrix::from_fn(p, |i, j| {
        cols[i].iter().zip(&cols[j]).map(|(x, y)| x.conj() * y).sum()
    });
    let null = if constraints.is_empty() {
        (0..p).map(|k| crate::linalg::vector::basis(p, k)).collect()
    } else {
        gram_null_vectors(&gram, tol.nullspace, 1.0)?
    };
    Ok(null
        .into_iter()
        .map(|c| {
            let mut x = ComplexMatrix::zeros(n);
            for (coef, &(a, b)) in c.iter().zip(&params) {
                x[(a, b)] += *coef;
            }
            x.conjugate_by(&u.adjoint())
        })
        .collect())
}

/// Block structure of the von Neumann algebra `S''` generated by `S`.
///
/// A generic Hermitian element of the commutant splits the space into
/// irreducible subspaces; a second generic element links equivalent ones
/// into isotypic classes and supplies the intertwiners that align copies.
pub fn bicommutant_algebra(s: &[ComplexMatrix]) -> Result<BlockAlgebra> {
    bicommutant_algebra_with(s, &Tolerances::default())
}

pub fn bicommutant_algebra_with(s: &[ComplexMatrix], tol: &Tolerances) -> Result<BlockAlgebra> {
    let n = check_dims(s)?;
    let comm = commutant_with(s, tol)?;
    let mut rng = ChaCha8Rng::seed_from_u64(MIXING_SEED ^ 0xb1c0);
    let k1 = generic_hermitian(&comm, n, &mut rng);
    let mut k2 = ComplexMatrix::zeros(n);
    for c in &comm {
        k2 += &c.scale(C64::new(gaussian(&mut rng), gaussian(&mut rng)));
    }
    let spec = eig_hermitian_with(&k1, Symmetry::Hermitian, tol)?;
    let clusters = spec.clusters(tol.cluster_gap);
    let bases: Vec<ComplexMatrix> = clusters
        .iter()
        .map(|c| {
            let mut q = RectColumns::new(n);
            for &k in c {
                q.push(spec.eigenvector(k));
            }
            q.finish()
        })
        .collect();
    let link_floor = 1e-6 * k2.frobenius_norm().max(1e-300);
    let mut classes: Vec<Vec<usize>> = Vec::new();
    let mut assigned = vec![false; clusters.len()];
    for i in 0..clusters.len() {
        if assigned[i] {
            continue;
        }
        assigned[i] = true;
        let mut class = vec![i];
        for j in i + 1..clusters.len() {
            if assigned[j] || clusters[j].len() != clusters[i].len() {
                continue;
            }
            let m = cross_block(&bases[j], &k2, &bases[i], clusters[i].len());
            if m.frobenius_norm() > link_floor {
                assigned[j] = true;
                class.push(j);
            }
        }
        classes.push(class);
    }

    let mut frame = ComplexMatrix::zeros(n);
    let mut blocks = Vec::new();
    let mut offset = 0;
    for class in &classes {
        let size = clusters[class[0]].len();
        let mult = class.len();
        let root = &bases[class[0]];
        for (r, &member) in class.iter().enumerate() {
            let copy_basis = if r == 0 {
                root.clone()
            } else {
                let m = cross_block(&bases[member], &k2, root, size);
                let u = polar_unitary(&m, tol)?;
                let full_u = pad(&u, n);
                &bases[member] * &full_u
            };
            for a in 0..size {
                frame.set_column(offset + a * mult + r, &copy_basis.column(a));
            }
        }
        offset += size * mult;
        blocks.push((size, mult));
    }
    let weights = BlockAlgebra::uniform_weights(&blocks);
    BlockAlgebra::with_frame(blocks, weights, frame)
}

/// `n × d` column sets stored in the first `d` columns of an `n × n` matrix.
struct RectColumns {
    m: ComplexMatrix,
    used: usize,
}

impl RectColumns {
    fn new(n: usize) -> Self {
        Self { m: ComplexMatrix::zeros(n), used: 0 }
    }
    fn push(&mut self, v: Vec<C64>) {
        self.m.set_column(self.used, &v);
        self.used += 1;
    }
    fn finish(self) -> ComplexMatrix {
        self.m
    }
}

/// `Q_j* K Q_i` restricted to the leading `d × d` corner.
fn cross_block(qj: &ComplexMatrix, k: &ComplexMatrix, qi: &ComplexMatrix, d: usize) -> ComplexMatrix {
    let full = &(&qj.adjoint() * k) * qi;
    full.compress(d)
}

fn pad(u: &ComplexMatrix, n: usize) -> ComplexMatrix {
    let mut out = ComplexMatrix::zeros(n);
    for i in 0..u.dim() {
        for j in 0..u.dim() {
            out[(i, j)] = u[(i, j)];
        }
    }
    out
}

/// Unitary factor of the polar decomposition `M = U |M|`.
fn polar_unitary(m: &ComplexMatrix, tol: &Tolerances) -> Result<ComplexMatrix> {
    let gram = &m.adjoint() * m;
    let s = eig_hermitian_with(&gram, Symmetry::Hermitian, tol)?;
    let inv_sqrt = apply_spectral_function(&s, |l| {
        if l > 0.0 {
            C64::new(1.0 / l.sqrt(), 0.0)
        } else {
            C64::new(f64::NAN, 0.0)
        }
    })?;
    Ok(m * &inv_sqrt)
}

/// Center dimension, factor flag and, for non-factors, unit vectors from
/// two distinct central summands (no unitary of M maps one to the other).
#[derive(Debug, Clone)]
pub struct FactorReport {
    pub center_dim: usize,
    pub is_factor: bool,
    pub witness: Option<(Vec<C64>, Vec<C64>)>,
}

pub fn center_and_factor(m: &BlockAlgebra) -> FactorReport {
    let center_dim = m.num_blocks();
    let is_factor = center_dim == 1;
    let witness = (!is_factor).then(|| {
        (
            m.canonical_vector(m.canonical_index(0, 0, 0)),
            m.canonical_vector(m.canonical_index(1, 0, 0)),
        )
    });
    FactorReport { center_dim, is_factor, witness }
}
