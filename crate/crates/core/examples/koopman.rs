//! Truncated Koopman model of an irrational rotation on the 2-torus: its
//! generator, the abelian algebra generated by a few time samples, and a
//! spectral filtration.

use vnlab::koopman::{build_torus_model, default_samples, dyadic_chain, koopman_algebra};

fn main() -> vnlab::Result<()> {
    let model = build_torus_model(2, vec![1.0, 2f64.sqrt()], 2)?;
    let samples = default_samples(&model);
    let algebra = koopman_algebra(&model, &samples)?;
    println!("ambient dim {}, samples {samples:?}", model.ambient_dim());
    println!("generated algebra blocks: {:?}", algebra.sorted_blocks());

    for (k, idx) in (0..model.ambient_dim()).step_by(5).map(|k| (k, model.multi_index(k))) {
        println!("mode {k:>2} ξ = {idx:?} frequency {:+.4}", model.frequencies()[k]);
    }
    for (level, e) in dyadic_chain(&model, 3)?.iter().enumerate() {
        println!("level {level}: target dimension {}", e.target_dimension());
    }
    Ok(())
}
