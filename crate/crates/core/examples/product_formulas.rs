//! Trotter and group-commutator products converging to their targets.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use vnlab::linalg::expm_skew;
use vnlab::propagate::{commutator_product, trotter_product};
use vnlab::random::random_unit_skew;

fn main() -> vnlab::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let a = random_unit_skew(4, &mut rng);
    let b = random_unit_skew(4, &mut rng);

    let sum = expm_skew(&(&a + &b))?;
    let comm = expm_skew(&a.commutator(&b))?;
    println!("{:>5} {:>12} {:>12}", "n", "trotter", "commutator");
    for n in [4, 8, 16, 32, 64] {
        let t = (&trotter_product(&a, &b, 1.0, n)? - &sum).frobenius_norm();
        let c = (&commutator_product(&a, &b, 1.0, n)? - &comm).frobenius_norm();
        println!("{n:>5} {t:>12.3e} {c:>12.3e}");
    }
    Ok(())
}
