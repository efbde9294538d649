//! Sampling endpoints of random bounded piecewise-constant controls and
//! writing them as CSV.

use vnlab::algebra::BlockAlgebra;
use vnlab::lie::ControlSystem;
use vnlab::linalg::{pauli, vector};
use vnlab::propagate::{sample_reachable, zero_extension_residual};

fn main() -> vnlab::Result<()> {
    let [sx, _, sz] = pauli();
    let sys = ControlSystem::from_hamiltonians(&sz, &[sx], BlockAlgebra::full(2))?;
    let xi0 = vector::basis(2, 0);
    let sample = sample_reachable(&sys, &xi0, 1.0, 2.0, 8, 2024)?;

    let worst = sample
        .states
        .iter()
        .map(|s| zero_extension_residual(&sys, s, &xi0, 1.5))
        .collect::<vnlab::Result<Vec<_>>>()?
        .into_iter()
        .fold(0.0, f64::max);
    print!("{}", sample.to_csv());
    eprintln!("zero-extension residual ≤ {worst:.1e}");
    Ok(())
}
