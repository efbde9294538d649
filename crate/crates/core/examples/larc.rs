//! Lie algebra rank condition for a qubit, and for a qubit copied twice,
//! where the reachable group is `U(M)` for `M = M₂ ⊗ 1` rather than `U(4)`.

use vnlab::algebra::BlockAlgebra;
use vnlab::lie::{larc_verdict, ControlSystem};
use vnlab::linalg::{pauli, ComplexMatrix};

fn main() -> vnlab::Result<()> {
    let [sx, sy, sz] = pauli();

    // Traceless generators only reach su(2); adding the identity fills u(2).
    let id = ComplexMatrix::identity(2);
    for (name, controls) in [("traceless", vec![sx.clone()]), ("with identity", vec![sx.clone(), &sz + &id])] {
        let qubit = ControlSystem::from_hamiltonians(&sy, &controls, BlockAlgebra::full(2))?;
        let r = larc_verdict(&qubit)?;
        println!("qubit, {name}: dim L = {}, dim u(M) = {}, controllable = {}", r.dim, r.dim_u_m, r.strong_controllable);
    }

    // σ ⊗ 1 acts on C² ⊗ C², inside M₂ ⊗ 1.
    let m = BlockAlgebra::with_uniform_weights(vec![(2, 2)])?;
    let sys = ControlSystem::from_hamiltonians(&sy.kron(&id), &[sx.kron(&id), (&sz + &id).kron(&id)], m)?;
    let report = larc_verdict(&sys)?;
    println!(
        "doubled: dim L = {}, dim u(M) = {}, controllable = {}, factor = {}, pure-state obstruction = {}",
        report.dim, report.dim_u_m, report.strong_controllable, report.is_factor, report.pure_state_obstruction
    );
    Ok(())
}
