//! Born series term for a time-dependent perturbation, with the Simpson
//! error estimate, compared against a fine piecewise-constant propagation.

use vnlab::algebra::BlockAlgebra;
use vnlab::lie::ControlSystem;
use vnlab::linalg::{vector, ComplexMatrix, C64, I};
use vnlab::propagate::{born_solution, psi_map};

fn main() -> vnlab::Result<()> {
    let drift = ComplexMatrix::from_diag(&[I * 1.0, I * -0.5, I * 2.0]);
    let sys = ControlSystem::new(drift, vec![], BlockAlgebra::full(3))?;
    let coupling = ComplexMatrix::from_fn(3, |i, j| if i != j { I * 0.05 } else { C64::new(0.0, 0.0) });
    let path = |s: f64| coupling.scale_real(s.cos());
    let xi0 = vector::basis(3, 0);

    for nodes in [9, 17, 33, 65] {
        let b = born_solution(&sys, &path, &xi0, 2.0, nodes)?;
        println!("nodes {nodes:>3}: |ξ(T)| = {:.12}, estimated error {:.2e}", vector::norm(&b.final_state), b.estimated_error);
    }
    let psi = psi_map(&sys, &path, &xi0, 2.0, 65)?;
    println!("|Ψ(V)| = {:.6e}", vector::norm(&psi));
    Ok(())
}
