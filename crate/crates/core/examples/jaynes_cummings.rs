//! Symmetry and controllability checks for the truncated Jaynes–Cummings
//! model, in both readings of the conserved operator.

use vnlab::systems::{build_jaynes_cummings_with, verify_symmetry, JcVariant};

fn main() -> vnlab::Result<()> {
    for variant in [JcVariant::Printed, JcVariant::ExcitationNumber] {
        let model = build_jaynes_cummings_with(8, 1.0, 0.4, 1.0, variant)?;
        let r = verify_symmetry(&model)?;
        println!("{variant:?}");
        println!("  interior [H_k, V]: {:.2e} {:.2e} {:.2e}", r.interior_residual[0], r.interior_residual[1], r.interior_residual[2]);
        println!("  dim L = {}, dim u(M) = {}, affiliated = {}", r.dim, r.dim_u_m, r.closure_affiliated);
    }
    Ok(())
}
