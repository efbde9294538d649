//! Trace-preserving conditional expectations onto subalgebras of a block algebra.
//!
//! A target is described in two stages. The pinching stage splits the
//! internal indices of each block into cells and keeps only the diagonal
//! cell blocks, giving sub-blocks `M_{|cell|}`. The merging stage groups
//! sub-blocks of equal size and replaces each group by its trace-weighted
//! average, which is the expectation onto the diagonal embedding. Either
//! stage may be absent; with both absent the expectation is the identity.

use serde::{Deserialize, Serialize};

use super::block::BlockAlgebra;
use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, C64};

/// Wire form: either a bare list of merge cells (`[[0,1],[2,3]]`) or an
/// object with optional `pinch` and `merge` fields.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Partition {
    Merge(Vec<Vec<usize>>),
    Staged {
        #[serde(default)]
        pinch: Option<Vec<Vec<Vec<usize>>>>,
        #[serde(default)]
        merge: Option<Vec<Vec<usize>>>,
    },
}

impl Partition {
    pub fn identity() -> Self {
        Partition::Staged { pinch: None, merge: None }
    }

    fn stages(&self) -> (Option<&Vec<Vec<Vec<usize>>>>, Option<&Vec<Vec<usize>>>) {
        match self {
            Partition::Merge(m) => (None, Some(m)),
            Partition::Staged { pinch, merge } => (pinch.as_ref(), merge.as_ref()),
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct SubBlock {
    block: usize,
    cell: usize,
    size: usize,
    weight: f64,
}

#[derive(Debug, Clone)]
pub struct ConditionalExpectation {
    algebra: BlockAlgebra,
    partition: Partition,
    pinch_cells: Vec<Vec<Vec<usize>>>,
    sub_blocks: Vec<SubBlock>,
    merge_cells: Vec<Vec<usize>>,
}

fn check_cover(cells: &[Vec<usize>], n: usize, what: &str) -> Result<()> {
    let mut seen = vec![false; n];
    for cell in cells {
        if cell.is_empty() {
            return Err(Error::BadPartition(format!("{what}: empty cell")));
        }
        for &i in cell {
            if i >= n || seen[i] {
                return Err(Error::BadPartition(format!(
                    "{what}: index {i} repeated or out of range 0..{n}"
                )));
            }
            seen[i] = true;
        }
    }
    if seen.iter().any(|s| !s) {
        return Err(Error::BadPartition(format!("{what}: cells do not cover 0..{n}")));
    }
    Ok(())
}

pub fn conditional_expectation(
    m: &BlockAlgebra,
    partition: &Partition,
) -> Result<ConditionalExpectation> {
    let (pinch, merge) = partition.stages();
    let pinch_cells: Vec<Vec<Vec<usize>>> = match pinch {
        Some(p) => {
            if p.len() != m.num_blocks() {
                return Err(Error::BadPartition(format!(
                    "pinch lists {} blocks, algebra has {}",
                    p.len(),
                    m.num_blocks()
                )));
            }
            for (k, cells) in p.iter().enumerate() {
                check_cover(cells, m.blocks()[k].size, &format!("pinch of block {k}"))?;
            }
            p.clone()
        }
        None => m.blocks().iter().map(|b| vec![(0..b.size).collect()]).collect(),
    };
    let mut sub_blocks = Vec::new();
    for (k, cells) in pinch_cells.iter().enumerate() {
        let b = m.blocks()[k];
        for (c, cell) in cells.iter().enumerate() {
            sub_blocks.push(SubBlock {
                block: k,
                cell: c,
                size: cell.len(),
                weight: m.weights()[k] * cell.len() as f64 / b.size as f64,
            });
        }
    }
    let merge_cells = match merge {
        Some(cells) => {
            check_cover(cells, sub_blocks.len(), "merge")?;
            for cell in cells {
                let size = sub_blocks[cell[0]].size;
                if cell.iter().any(|&j| sub_blocks[j].size != size) {
                    return Err(Error::BadPartition(format!(
                        "merge cell {cell:?} mixes sub-blocks of different sizes"
                    )));
                }
            }
            cells.clone()
        }
        None => (0..sub_blocks.len()).map(|j| vec![j]).collect(),
    };
    Ok(ConditionalExpectation {
        algebra: m.clone(),
        partition: partition.clone(),
        pinch_cells,
        sub_blocks,
        merge_cells,
    })
}

impl ConditionalExpectation {
    pub fn identity(m: &BlockAlgebra) -> Self {
        conditional_expectation(m, &Partition::identity()).expect("identity partition is valid")
    }

    /// Expectation onto the scalars, `A ↦ τ(A) I`.
    pub fn onto_scalars(m: &BlockAlgebra) -> Self {
        let pinch: Vec<Vec<Vec<usize>>> =
            m.blocks().iter().map(|b| (0..b.size).map(|i| vec![i]).collect()).collect();
        let total: usize = m.blocks().iter().map(|b| b.size).sum();
        let partition = Partition::Staged {
            pinch: Some(pinch),
            merge: Some(vec![(0..total).collect()]),
        };
        conditional_expectation(m, &partition).expect("scalar partition is valid")
    }

    pub fn algebra(&self) -> &BlockAlgebra {
        &self.algebra
    }

    pub fn partition(&self) -> &Partition {
        &self.partition
    }

    pub fn is_identity(&self) -> bool {
        self.merge_cells.iter().all(|c| c.len() == 1)
            && self.pinch_cells.iter().all(|cells| cells.len() == 1)
    }

    /// Complex dimension of the target subalgebra.
    pub fn target_dimension(&self) -> usize {
        self.merge_cells.iter().map(|c| self.sub_blocks[c[0]].size.pow(2)).sum()
    }

    fn sub_matrix(&self, parts: &[ComplexMatrix], j: usize) -> ComplexMatrix {
        let sb = self.sub_blocks[j];
        let cell = &self.pinch_cells[sb.block][sb.cell];
        let src = &parts[sb.block];
        ComplexMatrix::from_fn(cell.len(), |a, b| src[(cell[a], cell[b])])
    }

    /// `E(A)`. Inputs outside the algebra are first projected onto it.
    pub fn apply(&self, a: &ComplexMatrix) -> Result<ComplexMatrix> {
        if a.dim() != self.algebra.ambient_dim() {
            return Err(Error::DimensionMismatch {
                expected: self.algebra.ambient_dim(),
                got: a.dim(),
            });
        }
        let parts = self.algebra.extract_blocks(a);
        let mut out: Vec<ComplexMatrix> =
            self.algebra.blocks().iter().map(|b| ComplexMatrix::zeros(b.size)).collect();
        for cell in &self.merge_cells {
            let total: f64 = cell.iter().map(|&j| self.sub_blocks[j].weight).sum();
            let size = self.sub_blocks[cell[0]].size;
            let mut avg = ComplexMatrix::zeros(size);
            for &j in cell {
                avg += &self.sub_matrix(&parts, j).scale_real(self.sub_blocks[j].weight / total);
            }
            for &j in cell {
                let sb = self.sub_blocks[j];
                let idx = &self.pinch_cells[sb.block][sb.cell];
                let target = &mut out[sb.block];
                for (x, &ia) in idx.iter().enumerate() {
                    for (y, &ib) in idx.iter().enumerate() {
                        target[(ia, ib)] = avg[(x, y)];
                    }
                }
            }
        }
        Ok(self.algebra.assemble(&out))
    }

    /// True when this expectation's target contains `coarse`'s target.
    pub fn refines(&self, coarse: &ConditionalExpectation) -> Result<bool> {
        if self.algebra != coarse.algebra {
            return Ok(false);
        }
        for g in self.algebra.generators() {
            let e = coarse.apply(&g)?;
            let back = self.apply(&e)?;
            if (&back - &e).frobenius_norm() > 1e-10 * e.frobenius_norm().max(1.0) {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// `E(A)` as a free function.
pub fn apply_expectation(e: &ConditionalExpectation, a: &ComplexMatrix) -> Result<ComplexMatrix> {
    e.apply(a)
}

/// `τ(A)` without the membership check, used internally for contract tests.
pub fn weighted_trace(m: &BlockAlgebra, a: &ComplexMatrix) -> C64 {
    m.trace_unchecked(a)
}
