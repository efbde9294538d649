use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use vnlab::algebra::{
    bicommutant_algebra, check_affiliated, commutant, conditional_expectation, weighted_trace,
    BlockAlgebra, ConditionalExpectation, Partition,
};
use vnlab::drift::{q_z, q_z_inverse, q_z_map, reconstruct};
use vnlab::koopman::{build_torus_model, generator, koopman_algebra, koopman_unitary};
use vnlab::lie::{bracket, generate_lie_algebra, lie_closure, ClosureOptions, ControlSystem};
use vnlab::linalg::{
    apply_spectral_function, eig_hermitian, expm_skew, resolvent, vector, ComplexMatrix, Symmetry, C64, I,
};
use vnlab::propagate::{
    born_solution, propagate_pwc, psi_map, random_control, sample_reachable, zero_extension_residual,
    PiecewiseConstantControl,
};
use vnlab::random::{
    random_hermitian, random_member, random_psd_member, random_skew, random_skew_member,
    random_unit_vector,
};
use vnlab::systems::{annihilation, build_jaynes_cummings, build_oscillator};

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn rel(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    (a - b).frobenius_norm() / (1.0 + b.frobenius_norm())
}

fn random_algebra(rng: &mut ChaCha8Rng) -> BlockAlgebra {
    let k = rng.random_range(1..=3);
    let blocks: Vec<(usize, usize)> = (0..k).map(|_| (rng.random_range(1..=3), rng.random_range(1..=2))).collect();
    let raw: Vec<f64> = (0..k).map(|_| rng.random_range(0.2..1.0)).collect();
    let total: f64 = raw.iter().sum();
    let weights = raw.iter().map(|w| w / total).collect();
    let dim: usize = blocks.iter().map(|&(n, m)| n * m).sum();
    let mut perm: Vec<usize> = (0..dim).collect();
    perm.shuffle(rng);
    BlockAlgebra::new(blocks, weights, perm).unwrap()
}

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig { cases, ..ProptestConfig::default() }
}

proptest! {
    #![proptest_config(config(24))]

    #[test]
    fn eigendecomposition_reconstructs(seed in any::<u64>(), n in 1usize..=32) {
        let a = random_hermitian(n, &mut rng(seed));
        let s = eig_hermitian(&a, Symmetry::Hermitian).unwrap();
        prop_assert!(rel(&s.reconstruct(), &a) <= 1e-10);
        let u = &s.unitary;
        prop_assert!(rel(&(&u.adjoint() * u), &ComplexMatrix::identity(n)) <= 1e-10);
    }

    #[test]
    fn exponential_of_skew_is_unitary(seed in any::<u64>(), n in 1usize..=16) {
        let u = expm_skew(&random_skew(n, &mut rng(seed))).unwrap();
        prop_assert!((&(&u.adjoint() * &u) - &ComplexMatrix::identity(n)).max_abs() <= 1e-10);
    }

    #[test]
    fn functional_calculus_is_multiplicative(seed in any::<u64>(), n in 1usize..=12) {
        let a = random_hermitian(n, &mut rng(seed));
        let s = eig_hermitian(&a, Symmetry::Hermitian).unwrap();
        let f = |l: f64| (I * l).exp();
        let g = |l: f64| C64::new(l * l, 0.0);
        let fg = apply_spectral_function(&s, |l| f(l) * g(l)).unwrap();
        let prod = &apply_spectral_function(&s, f).unwrap() * &apply_spectral_function(&s, g).unwrap();
        prop_assert!(rel(&fg, &prod) <= 1e-10);
    }

    #[test]
    fn resolvent_identity(seed in any::<u64>(), n in 1usize..=10) {
        let a = random_hermitian(n, &mut rng(seed));
        let z = C64::new(0.3, 1.0);
        let w = C64::new(-0.5, 2.0);
        let rz = resolvent(&a, z).unwrap();
        let rw = resolvent(&a, w).unwrap();
        let lhs = &rz - &rw;
        let rhs = (&rz * &rw).scale(z - w);
        prop_assert!(rel(&lhs, &rhs) <= 1e-10);
    }

    #[test]
    fn bicommutant_recovers_algebra(seed in any::<u64>()) {
        let mut r = rng(seed);
        let m = random_algebra(&mut r);
        let gens = vec![random_member(&m, &mut r), random_member(&m, &mut r)];
        let mm = bicommutant_algebra(&gens).unwrap();
        prop_assert_eq!(mm.sorted_blocks(), m.sorted_blocks());
        for g in &gens {
            prop_assert!(mm.membership_residual(g) <= 1e-8);
        }
    }

    #[test]
    fn commutant_duality(seed in any::<u64>()) {
        let mut r = rng(seed);
        let m = random_algebra(&mut r);
        let gens = vec![random_member(&m, &mut r), random_member(&m, &mut r)];
        let c = commutant(&gens).unwrap();
        prop_assert_eq!(c.len(), m.commutant_dimension());
        prop_assert_eq!(commutant(&c).unwrap().len(), m.dimension());
    }

    #[test]
    fn expectations_are_trace_preserving_projections(seed in any::<u64>(), n in 1usize..=3, k in 1usize..=3) {
        let mut r = rng(seed);
        let blocks = vec![(n, 1); k];
        let m = BlockAlgebra::with_uniform_weights(blocks).unwrap();
        let pinch = Partition::Staged { pinch: Some(vec![(0..n).map(|i| vec![i]).collect(); k]), merge: None };
        let targets = [
            ConditionalExpectation::identity(&m),
            ConditionalExpectation::onto_scalars(&m),
            conditional_expectation(&m, &Partition::Merge(vec![(0..k).collect()])).unwrap(),
            conditional_expectation(&m, &pinch).unwrap(),
        ];
        let a = random_member(&m, &mut r);
        let p = random_psd_member(&m, &mut r);
        for e in &targets {
            let ea = e.apply(&a).unwrap();
            prop_assert!(rel(&e.apply(&ea).unwrap(), &ea) <= 1e-12);
            prop_assert!((weighted_trace(&m, &ea) - weighted_trace(&m, &a)).norm() <= 1e-12 * (1.0 + a.frobenius_norm()));
            let ep = e.apply(&p).unwrap();
            let s = eig_hermitian(&ep.hermitian_part(), Symmetry::Hermitian).unwrap();
            prop_assert!(s.eigenvalues.iter().all(|&l| l >= -1e-10));
            prop_assert!(m.membership_residual(&ea) <= 1e-12);
        }
    }

    #[test]
    fn trace_is_positive_and_tracial(seed in any::<u64>()) {
        let mut r = rng(seed);
        let m = random_algebra(&mut r);
        let a = random_member(&m, &mut r);
        let ad = a.adjoint();
        let t1 = weighted_trace(&m, &(&ad * &a));
        let t2 = weighted_trace(&m, &(&a * &ad));
        prop_assert!(t1.re >= 0.0);
        prop_assert!((t1 - t2).norm() <= 1e-12 * (1.0 + t1.norm()));
    }

    #[test]
    fn affiliation_matches_projection(seed in any::<u64>(), perturb in any::<bool>()) {
        let mut r = rng(seed);
        let m = random_algebra(&mut r);
        let mut a = random_hermitian(m.ambient_dim(), &mut r);
        if !perturb {
            a = m.project(&a);
        }
        let verdict = check_affiliated(&a, &m).verdict;
        let fixed = m.membership_residual(&a) <= 1e-8;
        prop_assert_eq!(verdict, fixed);
    }
}

proptest! {
    #![proptest_config(config(24))]

    #[test]
    fn scalar_drift_map_inverts_and_reflects(omega in -50.0f64..50.0, z in 0.05f64..5.0) {
        prop_assume!(omega.abs() >= 1e-2);
        let u = q_z(omega, z);
        prop_assert!((q_z(-omega, z) + u).abs() <= 1e-15);
        let back = q_z_inverse(u, z);
        if omega.abs() >= z {
            prop_assert!((back - omega).abs() <= 1e-9 * (1.0 + omega.abs()));
        } else {
            prop_assert!((back - z * z / omega).abs() <= 1e-9 * (1.0 + (z * z / omega).abs()));
        }
    }

    #[test]
    fn drift_map_preserves_affiliation_and_skewness(seed in any::<u64>(), z in 0.1f64..3.0) {
        let mut r = rng(seed);
        let m = random_algebra(&mut r);
        let v0 = random_skew_member(&m, &mut r);
        let qz = q_z_map(&v0, z).unwrap();
        prop_assert!(rel(&q_z_map(&(-&v0), z).unwrap(), &(-&qz)) <= 1e-12);
        prop_assert!(check_affiliated(&qz, &m).verdict);
        prop_assert!(qz.skew_residual() <= 1e-12);
        let e = ConditionalExpectation::onto_scalars(&m);
        let c = e.apply(&qz).unwrap();
        let rec = reconstruct(&c, z).unwrap();
        prop_assert!(rec.skew_residual() <= 1e-10);
        prop_assert!(check_affiliated(&rec, &m).verdict);
    }

    #[test]
    fn drift_roundtrip_above_threshold(seed in any::<u64>(), n in 1usize..=6) {
        let mut r = rng(seed);
        let z = 0.5;
        let omegas: Vec<C64> = (0..n)
            .map(|_| {
                let w: f64 = r.random_range(z..10.0);
                C64::new(0.0, if r.random::<bool>() { w } else { -w })
            })
            .collect();
        let u = expm_skew(&random_skew(n, &mut r)).unwrap();
        let v0 = ComplexMatrix::from_diag(&omegas).conjugate_by(&u);
        let back = reconstruct(&q_z_map(&v0, z).unwrap(), z).unwrap();
        prop_assert!(rel(&back, &v0) <= 1e-9);
    }
}

fn small_system(r: &mut ChaCha8Rng) -> ControlSystem {
    let m = random_algebra(r);
    let drift = random_skew_member(&m, r);
    let controls = vec![random_skew_member(&m, r), random_skew_member(&m, r)];
    ControlSystem::new(drift, controls, m).unwrap()
}

proptest! {
    #![proptest_config(config(12))]

    #[test]
    fn closure_is_idempotent_and_monotone(seed in any::<u64>()) {
        let mut r = rng(seed);
        let m = random_algebra(&mut r);
        let gens: Vec<ComplexMatrix> = (0..2).map(|_| random_skew_member(&m, &mut r)).collect();
        let l = generate_lie_algebra(&gens).unwrap();
        let again = generate_lie_algebra(&l.elements).unwrap();
        prop_assert_eq!(again.dim(), l.dim());
        let first = generate_lie_algebra(&gens[..1]).unwrap();
        prop_assert!(first.dim() <= l.dim());
        for g in &first.elements {
            prop_assert!(l.projection_residual(g) <= 1e-8);
        }
        for b in &l.elements {
            prop_assert!(check_affiliated(b, &m).verdict);
        }
    }

    #[test]
    fn jacobi_identity(seed in any::<u64>(), n in 1usize..=8) {
        let mut r = rng(seed);
        let (a, b, c) = (random_skew(n, &mut r), random_skew(n, &mut r), random_skew(n, &mut r));
        let sum = &(&bracket(&a, &bracket(&b, &c)) + &bracket(&b, &bracket(&c, &a))) + &bracket(&c, &bracket(&a, &b));
        prop_assert!(sum.max_abs() <= 1e-10 * (1.0 + a.max_abs() * b.max_abs() * c.max_abs()));
    }

    #[test]
    fn closure_options_default_matches_generate(seed in any::<u64>()) {
        let mut r = rng(seed);
        let gens = vec![random_skew(3, &mut r), random_skew(3, &mut r)];
        let a = generate_lie_algebra(&gens).unwrap();
        let b = lie_closure(&gens, &ClosureOptions::default()).unwrap();
        prop_assert_eq!(a.dim(), b.dim());
    }

    #[test]
    fn propagation_is_unitary(seed in any::<u64>(), t in 0.1f64..3.0) {
        let mut r = rng(seed);
        let sys = small_system(&mut r);
        let xi0 = random_unit_vector(sys.dim(), &mut r);
        let ctrl = random_control(2, t, 1.0, seed).unwrap();
        let xi = propagate_pwc(&sys, &ctrl, &xi0).unwrap();
        prop_assert!((vector::norm(&xi) - 1.0).abs() <= 1e-10);
    }

    #[test]
    fn psi_is_affine(seed in any::<u64>(), alpha in -2.0f64..2.0) {
        let mut r = rng(seed);
        let sys = small_system(&mut r);
        let m = sys.algebra().clone();
        let xi0 = random_unit_vector(sys.dim(), &mut r);
        let (v1, v2) = (random_skew_member(&m, &mut r), random_skew_member(&m, &mut r));
        let p1 = {
            let v1 = v1.clone();
            move |s: f64| v1.scale_real(s.cos())
        };
        let p2 = {
            let v2 = v2.clone();
            move |s: f64| v2.scale_real(1.0 + s)
        };
        let mix = |s: f64| &p1(s).scale_real(alpha) + &p2(s).scale_real(1.0 - alpha);
        let a = psi_map(&sys, &p1, &xi0, 1.0, 33).unwrap();
        let b = psi_map(&sys, &p2, &xi0, 1.0, 33).unwrap();
        let c = psi_map(&sys, &mix, &xi0, 1.0, 33).unwrap();
        let expected = vector::add(&vector::scale(&a, C64::new(alpha, 0.0)), &vector::scale(&b, C64::new(1.0 - alpha, 0.0)));
        prop_assert!(vector::norm(&vector::sub(&c, &expected)) <= 1e-10 * (1.0 + vector::norm(&expected)));
    }

    #[test]
    fn born_error_shrinks_under_refinement(seed in any::<u64>()) {
        let mut r = rng(seed);
        let sys = small_system(&mut r);
        let v = random_skew_member(sys.algebra(), &mut r);
        let path = move |s: f64| v.scale_real((2.0 * s).sin());
        let xi0 = random_unit_vector(sys.dim(), &mut r);
        let coarse = born_solution(&sys, &path, &xi0, 1.0, 17).unwrap();
        let fine = born_solution(&sys, &path, &xi0, 1.0, 33).unwrap();
        prop_assert!(fine.estimated_error <= 0.2 * coarse.estimated_error || fine.estimated_error <= 1e-12);
    }

    #[test]
    fn reachable_states_stay_affiliated(seed in any::<u64>()) {
        let mut r = rng(seed);
        let sys = small_system(&mut r);
        let xi0 = random_unit_vector(sys.dim(), &mut r);
        let sample = sample_reachable(&sys, &xi0, 1.5, 2.0, 20, seed).unwrap();
        for s in &sample.states {
            prop_assert!(check_affiliated(&s.unitary, sys.algebra()).verdict);
            prop_assert!(zero_extension_residual(&sys, s, &xi0, 2.5).unwrap() <= 1e-10);
        }
    }
}

proptest! {
    #![proptest_config(config(12))]

    #[test]
    fn koopman_generator_matches_finite_difference(a0 in 0.1f64..2.0, a1 in 0.1f64..2.0, k in 1usize..=3, t in -2.0f64..2.0) {
        let model = build_torus_model(2, vec![a0, a1], k).unwrap();
        let h = 1e-4;
        let fd = (&koopman_unitary(&model, t + h) - &koopman_unitary(&model, t - h)).scale_real(0.5 / h);
        let exact = &generator(&model) * &koopman_unitary(&model, t);
        prop_assert!((&fd - &exact).frobenius_norm() <= 1e-3 * exact.frobenius_norm());
    }

    #[test]
    fn koopman_algebra_is_abelian_and_sample_independent(a0 in 0.1f64..2.0, k in 1usize..=3) {
        let model = build_torus_model(2, vec![a0, a0 * std::f64::consts::SQRT_2], k).unwrap();
        let fmax = model.frequencies().iter().fold(0.0f64, |m, f| m.max(f.abs()));
        let one = koopman_algebra(&model, &[1.0 / fmax, std::f64::consts::SQRT_2 / fmax]).unwrap();
        let two = koopman_algebra(&model, &[0.7 / fmax, 0.31 / fmax, 0.11 / fmax]).unwrap();
        prop_assert_eq!(one.sorted_blocks(), two.sorted_blocks());
        prop_assert!(one.blocks().iter().all(|b| b.size == 1));
    }
}

#[test]
fn jaynes_cummings_ladder_and_sizes() {
    for n_max in [4, 8, 12] {
        let a = annihilation(n_max);
        let num = &a.adjoint() * &a;
        for (k, v) in num.diagonal().iter().enumerate() {
            assert!((v.re - k as f64).abs() <= 1e-12 && v.im.abs() <= 1e-12);
        }
        let model = build_jaynes_cummings(n_max, 1.0, 0.5, 1.0).unwrap();
        assert_eq!(model.ambient_dim(), 2 * n_max);
        assert_eq!(model.eigenblock_algebra.ambient_dim(), 2 * n_max);
        assert!(model.v.hermitian_residual() <= 1e-12);
    }
}

#[test]
fn oscillator_definitional_identities() {
    let m = build_oscillator(24).unwrap();
    assert!(rel(&m.v1, &(&m.v_plus - &m.v_minus)) <= 1e-14);
    assert!(rel(&m.v2, &(&m.v_plus + &m.v_minus).scale(I)) <= 1e-14);
    assert!(m.x.hermitian_residual() <= 1e-14 && m.p.hermitian_residual() <= 1e-14);
    assert!(m.v0.skew_residual() <= 1e-14);
}

#[test]
fn piecewise_control_rejects_bad_breakpoints() {
    assert!(PiecewiseConstantControl::new(vec![0.0, 0.5, 0.4], vec![vec![0.0], vec![0.0]], 1.0).is_err());
    assert!(PiecewiseConstantControl::new(vec![0.0, 1.0], vec![vec![2.0]], 1.0).is_err());
    assert!(random_control(1, 1.0, 0.5, 7).unwrap().values().iter().flatten().all(|u| u.abs() <= 0.5));
}

#[test]
fn random_algebra_members_commute_with_commutant() {
    let mut r = rng(11);
    for _ in 0..8 {
        let m = random_algebra(&mut r);
        let a = random_member(&m, &mut r);
        for c in m.commutant_generators() {
            assert!(a.commutator(&c).max_abs() <= 1e-12 * (1.0 + a.max_abs()));
        }
    }
}
