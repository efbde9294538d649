//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any failure.

use std::panic::{self, AssertUnwindSafe};
use std::process::ExitCode;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use vnlab::algebra::{
    check_affiliated, conditional_expectation, gns_standard_form, BlockAlgebra, Partition,
};
use vnlab::drift::{basis_probes, convergence_sweep, drift_approximation, q_z_map, reconstruct, DriftApproxParams};
use vnlab::koopman::{build_torus_model, dyadic_chain, generator, koopman_algebra, koopman_algebra_default};
use vnlab::lie::{larc_verdict, ControlSystem};
use vnlab::linalg::{eig_hermitian, expm_skew, pauli, vector, ComplexMatrix, Symmetry, C64, I};
use vnlab::propagate::{commutator_product, psi_map, trotter_product};
use vnlab::random::{random_hermitian_member, random_member, random_psd_member, random_skew_member, random_unit_skew, random_unit_vector};
use vnlab::systems::{
    build_jaynes_cummings, build_jaynes_cummings_with, build_oscillator, verify_oscillator_brackets, verify_symmetry,
    JcVariant,
};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn skew_diag(w: &[f64]) -> ComplexMatrix {
    ComplexMatrix::from_diag(&w.iter().map(|&x| I * x).collect::<Vec<_>>())
}

fn c1_drift_roundtrip() -> Outcome {
    let v0 = skew_diag(&[1.0, -1.0, 2.0, -2.0, 3.0, -3.0]);
    let m = BlockAlgebra::diagonal(6);
    let params = DriftApproxParams::new(0.5, vnlab::algebra::ConditionalExpectation::identity(&m), basis_probes(6)).unwrap();
    let out = drift_approximation(&v0, &params).unwrap();
    let err = (&out - &v0).frobenius_norm();
    let z = 1.0;
    let omega = 0.25;
    let back = reconstruct(&q_z_map(&skew_diag(&[omega]), z).unwrap(), z).unwrap();
    let reflect = (back[(0, 0)] - I * (z * z / omega)).norm();
    outcome(err <= 1e-8 && reflect <= 1e-8, format!("roundtrip error {err:.2e}, reflection error {reflect:.2e}"))
}

fn c2_iterated_limit() -> Outcome {
    let model = build_torus_model(1, vec![1.0], 8).unwrap();
    let v0 = generator(&model);
    let chain = dyadic_chain(&model, 4).unwrap();
    let table = convergence_sweep(&v0, &[1.0, 0.5, 0.25, 0.1], &chain, &basis_probes(v0.dim())).unwrap();
    let monotone = table.rows_non_increasing(0.0);
    let last = table.bottom_right();
    outcome(
        monotone && last <= 1e-6,
        format!("rows non-increasing: {monotone}, bottom-right {last:.2e}"),
    )
}

fn c3_product_formulas() -> Outcome {
    let mut ratios_ok = true;
    let mut comm_ok = true;
    let mut worst_ratio = (f64::INFINITY, f64::NEG_INFINITY);
    let mut worst_comm64 = 0.0f64;
    for seed in 0..5u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(1000 + seed);
        let a = random_unit_skew(8, &mut rng);
        let b = random_unit_skew(8, &mut rng);
        let exact = expm_skew(&(&a + &b)).unwrap();
        let e = |n: usize| (&trotter_product(&a, &b, 1.0, n).unwrap() - &exact).frobenius_norm();
        for n in [8, 16, 32] {
            let r = e(2 * n) / e(n);
            worst_ratio = (worst_ratio.0.min(r), worst_ratio.1.max(r));
            ratios_ok &= (0.35..=0.65).contains(&r);
        }
        let target = expm_skew(&a.commutator(&b)).unwrap();
        let errs: Vec<f64> = [8, 16, 32, 64]
            .iter()
            .map(|&n| (&commutator_product(&a, &b, 1.0, n).unwrap() - &target).frobenius_norm())
            .collect();
        comm_ok &= errs.windows(2).all(|w| w[1] < w[0]) && errs[3] <= 0.05;
        worst_comm64 = worst_comm64.max(errs[3]);
    }
    outcome(
        ratios_ok && comm_ok,
        format!(
            "Trotter ratios in [{:.3}, {:.3}], commutator error at n=64 ≤ {worst_comm64:.2e}, decreasing: {comm_ok}",
            worst_ratio.0, worst_ratio.1
        ),
    )
}

fn c4_larc() -> Outcome {
    let [sx, _, sz] = pauli();
    let m2 = ControlSystem::new(
        sx.scale(I),
        vec![sz.scale(I), ComplexMatrix::identity(2).scale(I)],
        BlockAlgebra::full(2),
    )
    .unwrap();
    let r1 = larc_verdict(&m2).unwrap();
    let ok1 = r1.dim == 4 && r1.strong_controllable;
    let d2 = ControlSystem::new(skew_diag(&[1.0, 2.0]), vec![skew_diag(&[3.0, 5.0])], BlockAlgebra::diagonal(2)).unwrap();
    let r2 = larc_verdict(&d2).unwrap();
    let ok2 = r2.dim == 2 && r2.strong_controllable;
    let mut rng = ChaCha8Rng::seed_from_u64(44);
    let mut ok3 = true;
    for blocks in [vec![(1, 1), (1, 1)], vec![(2, 1), (1, 2)], vec![(2, 2), (3, 1)]] {
        let m = BlockAlgebra::with_uniform_weights(blocks).unwrap();
        let sys = ControlSystem::new(
            random_skew_member(&m, &mut rng),
            vec![random_skew_member(&m, &mut rng)],
            m,
        )
        .unwrap();
        ok3 &= larc_verdict(&sys).unwrap().pure_state_obstruction;
    }
    outcome(
        ok1 && ok2 && ok3,
        format!(
            "M2 dim {} controllable {}; diagonal dim {} controllable {}; two-block obstruction {ok3}",
            r1.dim, r1.strong_controllable, r2.dim, r2.strong_controllable
        ),
    )
}

fn c5_psi_convexity() -> Outcome {
    let m = BlockAlgebra::with_uniform_weights(vec![(2, 2), (4, 3)]).unwrap();
    assert_eq!(m.ambient_dim(), 16);
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let sys = ControlSystem::new(random_skew_member(&m, &mut rng), vec![], m.clone()).unwrap();
    let xi0 = random_unit_vector(16, &mut rng);
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let p: Vec<ComplexMatrix> = (0..6).map(|_| random_hermitian_member(&m, &mut rng)).collect();
        let path = |c: &[ComplexMatrix]| {
            let c = c.to_vec();
            move |s: f64| &(&c[0] + &c[1].scale_real(s)) + &c[2].scale_real(s * s)
        };
        let v = path(&p[0..3]);
        let w = path(&p[3..6]);
        let theta = 0.5;
        let mix = |s: f64| &v(s).scale_real(theta) + &w(s).scale_real(1.0 - theta);
        let nodes = 41;
        let pv = psi_map(&sys, &v, &xi0, 1.0, nodes).unwrap();
        let pw = psi_map(&sys, &w, &xi0, 1.0, nodes).unwrap();
        let pm = psi_map(&sys, &mix, &xi0, 1.0, nodes).unwrap();
        let affine = vector::add(&vector::scale(&pv, C64::new(theta, 0.0)), &vector::scale(&pw, C64::new(1.0 - theta, 0.0)));
        let dev = vector::sub(&pm, &affine).iter().fold(0.0f64, |acc, c| acc.max(c.norm()));
        worst = worst.max(dev);
    }
    outcome(worst <= 1e-10, format!("max affine deviation {worst:.2e} over 20 path pairs"))
}

fn c6_expectation_axioms() -> Outcome {
    // Blocks occupy 0..4, 4..6, 6..9 in canonical order.
    let m = BlockAlgebra::new(vec![(2, 2), (2, 1), (1, 3)], vec![0.5, 0.3, 0.2], (0..9).collect()).unwrap();
    let tau = |a: &ComplexMatrix| -> C64 {
        let ranges = [(0..4, 0.5 / 4.0), (4..6, 0.3 / 2.0), (6..9, 0.2 / 3.0)];
        ranges.iter().map(|(r, w)| r.clone().map(|i| a[(i, i)]).sum::<C64>() * *w).sum()
    };
    let partition = Partition::Staged {
        pinch: Some(vec![vec![vec![0], vec![1]], vec![vec![0, 1]], vec![vec![0]]]),
        merge: Some(vec![vec![0, 3], vec![1], vec![2]]),
    };
    let e = conditional_expectation(&m, &partition).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let (mut pos, mut idem, mut bimod, mut trace) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for _ in 0..100 {
        let p = random_psd_member(&m, &mut rng);
        let ep = e.apply(&p).unwrap();
        let low = eig_hermitian(&ep, Symmetry::Hermitian).unwrap().eigenvalues[0];
        pos = pos.max((-low).max(0.0) / p.frobenius_norm());
        let a = random_member(&m, &mut rng);
        let ea = e.apply(&a).unwrap();
        let scale = a.frobenius_norm();
        idem = idem.max((&e.apply(&ea).unwrap() - &ea).frobenius_norm() / scale);
        let b = e.apply(&random_member(&m, &mut rng)).unwrap();
        let c = e.apply(&random_member(&m, &mut rng)).unwrap();
        let lhs = e.apply(&(&(&b * &a) * &c)).unwrap();
        let rhs = &(&b * &ea) * &c;
        bimod = bimod.max((&lhs - &rhs).frobenius_norm() / (b.frobenius_norm() * scale * c.frobenius_norm()));
        trace = trace.max((tau(&ea) - tau(&a)).norm() / scale);
    }
    let ok = pos <= 1e-9 && idem <= 1e-9 && bimod <= 1e-9 && trace <= 1e-9;
    outcome(
        ok,
        format!("positivity {pos:.1e}, idempotence {idem:.1e}, bimodule {bimod:.1e}, trace {trace:.1e}"),
    )
}

fn c7_koopman() -> Outcome {
    let m1 = build_torus_model(2, vec![1.0, 2f64.sqrt()], 2).unwrap();
    let a1 = koopman_algebra_default(&m1).unwrap();
    let singletons = a1.sorted_blocks() == vec![(1, 1); 25];
    let aff1 = check_affiliated(&generator(&m1), &a1).verdict;
    let m2 = build_torus_model(2, vec![1.0, 1.0], 1).unwrap();
    let a2 = koopman_algebra(&m2, &[1.0 / 2.0, 2f64.sqrt() / 2.0]).unwrap();
    let mut mults: Vec<usize> = a2.blocks().iter().map(|b| b.multiplicity).collect();
    mults.sort();
    let levels = mults == vec![1, 1, 2, 2, 3] && a2.blocks().iter().all(|b| b.size == 1);
    let aff2 = check_affiliated(&generator(&m2), &a2).verdict;
    outcome(
        singletons && levels && aff1 && aff2,
        format!(
            "α=(1,√2): {} blocks, singletons {singletons}; α=(1,1): multiplicities {mults:?}; generator affiliated {aff1}/{aff2}",
            a1.num_blocks()
        ),
    )
}

fn c8_jaynes_cummings() -> Outcome {
    let model = build_jaynes_cummings(32, 1.0, 1.0, 1.0).unwrap();
    let r = verify_symmetry(&model).unwrap();
    let worst = r.interior_residual.iter().fold(0.0f64, |a, &b| a.max(b));
    let ok = worst <= 1e-8 && r.closure_affiliation_residual <= 1e-7;
    let alt = build_jaynes_cummings_with(32, 1.0, 1.0, 1.0, JcVariant::ExcitationNumber).unwrap();
    let ra = verify_symmetry(&alt).unwrap();
    let alt_worst = ra.interior_residual.iter().fold(0.0f64, |a, &b| a.max(b));
    outcome(
        ok,
        format!(
            "interior [H_i, P] residuals {:.1e}/{:.1e}/{:.1e}, closure affiliation residual {:.1e}; \
             with σ₃/2 in V: {alt_worst:.1e} and {:.1e}",
            r.interior_residual[0],
            r.interior_residual[1],
            r.interior_residual[2],
            r.closure_affiliation_residual,
            ra.closure_affiliation_residual
        ),
    )
}

fn c9_oscillator() -> Outcome {
    let model = build_oscillator(64).unwrap();
    assert_eq!(model.interior_dim, 48);
    let r = verify_oscillator_brackets(&model).unwrap();
    let brackets = r.bracket_residuals.iter().all(|&x| x <= 1e-6);
    let ok = brackets && r.dim == 4 && r.commutant_dim == 1;
    outcome(
        ok,
        format!(
            "bracket residuals {:.1e}/{:.1e}/{:.1e} ([V+,V-] vs iI: {:.1e}), closure dim {}, commutant dim {}",
            r.bracket_residuals[0],
            r.bracket_residuals[1],
            r.bracket_residuals[2],
            r.plus_minus_vs_i,
            r.dim,
            r.commutant_dim
        ),
    )
}

fn c10_gns() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let cases: [(BlockAlgebra, fn(&ComplexMatrix) -> C64); 2] = [
        (BlockAlgebra::full(2), |a| a.trace() / 2.0),
        (BlockAlgebra::diagonal(4), |a| a.diagonal().iter().sum::<C64>() / 4.0),
    ];
    let (mut hom, mut state) = (0.0f64, 0.0f64);
    for (m, tau) in &cases {
        let g = gns_standard_form(m);
        let xi = g.cyclic_vector().to_vec();
        for _ in 0..50 {
            let a = random_member(m, &mut rng);
            let b = random_member(m, &mut rng);
            let pa = g.represent(&a).unwrap();
            let pb = g.represent(&b).unwrap();
            let prod = (&g.represent(&(&a * &b)).unwrap() - &(&pa * &pb)).max_abs();
            let adj = (&g.represent(&a.adjoint()).unwrap() - &pa.adjoint()).max_abs();
            let sum = (&g.represent(&(&a + &b)).unwrap() - &(&pa + &pb)).max_abs();
            hom = hom.max(prod).max(adj).max(sum);
            let s = vector::inner(&pa.apply(&xi), &xi);
            state = state.max((s - tau(&a)).norm());
        }
    }
    outcome(
        hom <= 1e-9 && state <= 1e-10,
        format!("homomorphism residual {hom:.1e}, vector-state error {state:.1e}"),
    )
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("drift-approximation roundtrip", c1_drift_roundtrip),
        ("iterated-limit trend", c2_iterated_limit),
        ("Trotter and commutator product rates", c3_product_formulas),
        ("Lie algebra rank condition", c4_larc),
        ("convex-linearity of the Born integral", c5_psi_convexity),
        ("conditional-expectation axioms", c6_expectation_axioms),
        ("Koopman algebra", c7_koopman),
        ("Jaynes-Cummings symmetry", c8_jaynes_cummings),
        ("oscillator brackets", c9_oscillator),
        ("GNS standard form", c10_gns),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (k, (name, f)) in criteria.iter().enumerate() {
        if !filter.is_empty() && !filter.iter().any(|p| name.contains(p.as_str())) {
            continue;
        }
        let result = panic::catch_unwind(AssertUnwindSafe(f));
        let (pass, detail) = match result {
            Ok(o) => (o.pass, o.detail),
            Err(e) => {
                let msg = e
                    .downcast_ref::<String>()
                    .cloned()
                    .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                    .unwrap_or_default();
                (false, format!("panicked: {msg}"))
            }
        };
        if !pass {
            failed += 1;
        }
        println!("criterion {:>2} {name}: {} ({detail})", k + 1, if pass { "PASS" } else { "FAIL" });
    }
    if failed > 0 {
        println!("{failed} criterion(s) failed");
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
