//! Finite-dimensional von Neumann algebra surrogates.

pub mod affiliation;
pub mod block;
pub mod commutant;
pub mod expectation;
pub mod gns;
pub mod singular;

pub use affiliation::{check_affiliated, check_affiliated_with, AffiliationCertificate};
pub use block::{Block, BlockAlgebra, BlockAlgebraJson};
pub use commutant::{
    bicommutant_algebra, bicommutant_algebra_with, center_and_factor, commutant, commutant_with,
    FactorReport,
};
pub use expectation::{apply_expectation, conditional_expectation, weighted_trace, ConditionalExpectation, Partition};
pub use gns::{gns_standard_form, GnsRepresentation};
pub use singular::{singular_value_function, SingularValueFunction};

use crate::error::Result;
use crate::linalg::{ComplexMatrix, C64};

/// `τ(A)` for a member `A` of `M`.
pub fn trace_of(a: &ComplexMatrix, m: &BlockAlgebra) -> Result<C64> {
    m.trace_of(a)
}

/// Constructor mirroring the wire form.
pub fn make_block_algebra(
    blocks: Vec<(usize, usize)>,
    trace_weights: Vec<f64>,
    basis_map: Vec<usize>,
) -> Result<BlockAlgebra> {
    BlockAlgebra::new(blocks, trace_weights, basis_map)
}
