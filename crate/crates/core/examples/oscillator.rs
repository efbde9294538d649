//! Fock-space oscillator: commutation relations on the interior levels,
//! the Lie algebra of its quadratic and linear generators, and the
//! commutant of position and momentum exponentials.

use vnlab::systems::{build_oscillator, verify_oscillator_brackets};

fn main() -> vnlab::Result<()> {
    let model = build_oscillator(32)?;
    let r = verify_oscillator_brackets(&model)?;
    println!("[x,p] − i: interior {:.2e}, edge {:.2e}", r.ccr_residual, r.ccr_edge_residual);
    println!("brackets: {:?}", r.bracket_residuals);
    println!("[V+,V-] against iI: {:.2e}", r.plus_minus_vs_i);
    println!("closure dim {}, commutant dim {}", r.dim, r.commutant_dim);
    Ok(())
}
