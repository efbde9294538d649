use super::block::BlockAlgebra;
use crate::linalg::ComplexMatrix;
use crate::tolerances::Tolerances;

/// Outcome of testing `A η M`. In finite dimensions this is membership in
/// `M = M''`, decided by commutation with the commutant's matrix units.
#[derive(Debug, Clone)]
pub struct AffiliationCertificate<'a> {
    pub operator: &'a ComplexMatrix,
    pub algebra: &'a BlockAlgebra,
    pub max_commutator_residual: f64,
    pub tolerance: f64,
    pub verdict: bool,
}

pub fn check_affiliated<'a>(
    a: &'a ComplexMatrix,
    m: &'a BlockAlgebra,
) -> AffiliationCertificate<'a> {
    check_affiliated_with(a, m, Tolerances::default().affiliation)
}

pub fn check_affiliated_with<'a>(
    a: &'a ComplexMatrix,
    m: &'a BlockAlgebra,
    tolerance: f64,
) -> AffiliationCertificate<'a> {
    let residual = if a.dim() != m.ambient_dim() || !a.is_finite() {
        f64::INFINITY
    } else {
        m.commutant_residual(a)
    };
    AffiliationCertificate {
        operator: a,
        algebra: m,
        max_commutator_residual: residual,
        tolerance,
        verdict: residual <= tolerance,
    }
}
