//! Block algebras: bicommutant recovery, trace, conditional expectation and
//! the standard form.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use vnlab::algebra::{
    bicommutant_algebra, center_and_factor, conditional_expectation, gns_standard_form, weighted_trace,
    BlockAlgebra, Partition,
};
use vnlab::random::random_member;

fn main() -> vnlab::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let m = BlockAlgebra::new(vec![(2, 1), (1, 2)], vec![0.5, 0.5], vec![3, 0, 2, 1])?;
    let gens = [random_member(&m, &mut rng), random_member(&m, &mut rng)];
    let mm = bicommutant_algebra(&gens)?;
    println!("blocks {:?} recovered as {:?}", m.sorted_blocks(), mm.sorted_blocks());
    println!("factor: {}", center_and_factor(&m).is_factor);

    let a = &gens[0];
    let pinch = Partition::Staged { pinch: Some(vec![vec![vec![0], vec![1]], vec![vec![0]]]), merge: None };
    let e = conditional_expectation(&m, &pinch)?;
    let ea = e.apply(a)?;
    println!("τ(a) = {:.6}, τ(E a) = {:.6}", weighted_trace(&m, a), weighted_trace(&m, &ea));

    let gns = gns_standard_form(&m);
    println!("standard form dim {}, ‖a‖₂ = {:.6}", gns.dim(), gns.l2_norm(a)?);
    Ok(())
}
