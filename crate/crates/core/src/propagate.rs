//! Time evolution with `ℏ = 1`: piecewise-constant control propagation,
//! the Born solution integral, product formulas and reachable-set sampling.
//!
//! The free evolution is `U^t = e^{−t·iV₀}`; a control segment of length
//! `Δt` with values `u` acts by `e^{−Δt(iV₀ + Σ u_j iV_j)}`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::check_affiliated_with;
use crate::drift::fmt17;
use crate::error::{Error, Result};
use crate::lie::ControlSystem;
use crate::linalg::{eig_hermitian, expm_skew, vector, ComplexMatrix, Symmetry, C64, I};
use crate::tolerances::Tolerances;

/// Controls constant on `[t_{k}, t_{k+1})`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PiecewiseConstantControl {
    breakpoints: Vec<f64>,
    values: Vec<Vec<f64>>,
    bound: f64,
}

impl PiecewiseConstantControl {
    pub fn new(breakpoints: Vec<f64>, values: Vec<Vec<f64>>, bound: f64) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::BadControl("at least one segment is required".into()));
        }
        if breakpoints.len() != values.len() + 1 {
            return Err(Error::BadControl(format!(
                "{} segments need {} breakpoints, got {}",
                values.len(),
                values.len() + 1,
                breakpoints.len()
            )));
        }
        if breakpoints[0] != 0.0 {
            return Err(Error::BadControl("first breakpoint must be 0".into()));
        }
        if breakpoints.windows(2).any(|w| !(w[1] > w[0]) || !w[1].is_finite()) {
            return Err(Error::BadControl("breakpoints must be strictly increasing".into()));
        }
        if !(bound >= 0.0) {
            return Err(Error::BadControl(format!("bound must be non-negative, got {bound}")));
        }
        let width = values[0].len();
        for u in &values {
            if u.len() != width {
                return Err(Error::BadControl("all segments need the same number of controls".into()));
            }
            if u.iter().any(|x| !x.is_finite() || x.abs() > bound) {
                return Err(Error::BadControl(format!("control value exceeds bound {bound}")));
            }
        }
        Ok(Self { breakpoints, values, bound })
    }

    /// A single segment of length `t`.
    pub fn constant(t: f64, u: Vec<f64>) -> Result<Self> {
        let bound = u.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        Self::new(vec![0.0, t], vec![u], bound)
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn values(&self) -> &[Vec<f64>] {
        &self.values
    }

    pub fn bound(&self) -> f64 {
        self.bound
    }

    pub fn segment_count(&self) -> usize {
        self.values.len()
    }

    pub fn duration(&self) -> f64 {
        *self.breakpoints.last().unwrap()
    }

    pub fn num_controls(&self) -> usize {
        self.values[0].len()
    }

    /// `(Δt, u)` per segment in time order.
    pub fn segments(&self) -> impl Iterator<Item = (f64, &[f64])> {
        self.breakpoints.windows(2).zip(&self.values).map(|(w, u)| (w[1] - w[0], u.as_slice()))
    }

    /// Appends a zero segment so the control ends at `t_end > T`.
    pub fn extended_by_zero(&self, t_end: f64) -> Result<Self> {
        let mut b = self.breakpoints.clone();
        b.push(t_end);
        let mut v = self.values.clone();
        v.push(vec![0.0; self.num_controls()]);
        Self::new(b, v, self.bound)
    }
}

fn check_state(xi0: &[C64], n: usize) -> Result<()> {
    if xi0.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: xi0.len() });
    }
    if (vector::norm(xi0) - 1.0).abs() > 1e-10 {
        return Err(Error::InvalidArgument("initial state must have unit norm".into()));
    }
    Ok(())
}

/// The propagator `∏ e^{−Δt·G(u)}` of a control, latest segment on the left.
pub fn pwc_unitary(sys: &ControlSystem, ctrl: &PiecewiseConstantControl) -> Result<ComplexMatrix> {
    if ctrl.num_controls() != sys.controls().len() {
        return Err(Error::BadControl(format!(
            "system has {} controls, control has {}",
            sys.controls().len(),
            ctrl.num_controls()
        )));
    }
    let tol = Tolerances::default();
    let mut u = ComplexMatrix::identity(sys.dim());
    for (dt, vals) in ctrl.segments() {
        let seg = expm_skew(&sys.generator(vals)?.scale_real(-dt))?;
        let cert = check_affiliated_with(&seg, sys.algebra(), tol.affiliation);
        if !cert.verdict {
            return Err(Error::NotMember { op: "pwc_unitary", residual: cert.max_commutator_residual });
        }
        u = &seg * &u;
    }
    Ok(u)
}

pub fn propagate_pwc(sys: &ControlSystem, ctrl: &PiecewiseConstantControl, xi0: &[C64]) -> Result<Vec<C64>> {
    check_state(xi0, sys.dim())?;
    Ok(pwc_unitary(sys, ctrl)?.apply(xi0))
}

/// Outcome of [`born_solution`].
#[derive(Debug, Clone, PartialEq)]
pub struct BornTrajectory {
    pub final_state: Vec<C64>,
    pub quadrature_nodes: usize,
    /// Richardson estimate `16/15·‖S_{2n−1} − S_n‖` of the quadrature error.
    pub estimated_error: f64,
}

/// `s ↦ U^s` for the free evolution, through one eigendecomposition.
struct FreeEvolution {
    omega: Vec<f64>,
    unitary: ComplexMatrix,
}

impl FreeEvolution {
    fn new(sys: &ControlSystem) -> Result<Self> {
        let s = eig_hermitian(sys.drift(), Symmetry::SkewHermitian)?;
        Ok(Self { omega: s.eigenvalues, unitary: s.unitary })
    }

    /// `U^s x = W diag(e^{−isω}) W* x`.
    fn apply(&self, s: f64, x: &[C64]) -> Vec<C64> {
        let mut y = self.unitary.adjoint().apply(x);
        for (yk, w) in y.iter_mut().zip(&self.omega) {
            *yk *= (-I * s * *w).exp();
        }
        self.unitary.apply(&y)
    }
}

fn simpson(
    free: &FreeEvolution,
    v_path: &(dyn Fn(f64) -> ComplexMatrix + Sync),
    xi0: &[C64],
    t: f64,
    nodes: usize,
) -> Result<Vec<C64>> {
    let h = t / (nodes - 1) as f64;
    let terms: Vec<Vec<C64>> = (0..nodes)
        .into_par_iter()
        .map(|k| {
            let s = k as f64 * h;
            let v = v_path(s);
            if v.dim() != xi0.len() {
                return Err(Error::DimensionMismatch { expected: xi0.len(), got: v.dim() });
            }
            let w = if k == 0 || k == nodes - 1 {
                1.0
            } else if k % 2 == 1 {
                4.0
            } else {
                2.0
            };
            let f = free.apply(t - s, &v.apply(&free.apply(s, xi0)));
            Ok(vector::scale(&f, C64::new(w * h / 3.0, 0.0)))
        })
        .collect::<Result<_>>()?;
    let mut acc = vec![C64::new(0.0, 0.0); xi0.len()];
    for term in terms {
        acc = vector::add(&acc, &term);
    }
    Ok(acc)
}

fn check_nodes(nodes: usize) -> Result<()> {
    if nodes < 3 || nodes % 2 == 0 {
        return Err(Error::InvalidArgument(format!("Simpson needs an odd node count ≥ 3, got {nodes}")));
    }
    Ok(())
}

fn check_path(sys: &ControlSystem, v_path: &(dyn Fn(f64) -> ComplexMatrix + Sync), t: f64, nodes: usize) -> Result<()> {
    let tol = Tolerances::default();
    let h = t / (nodes - 1) as f64;
    for k in 0..nodes {
        let v = v_path(k as f64 * h);
        if v.dim() != sys.dim() {
            return Err(Error::DimensionMismatch { expected: sys.dim(), got: v.dim() });
        }
        let cert = check_affiliated_with(&v, sys.algebra(), tol.affiliation);
        if !cert.verdict {
            return Err(Error::NotMember { op: "born_solution", residual: cert.max_commutator_residual });
        }
    }
    Ok(())
}

/// `ξ(T) = U^Tξ₀ + ∫₀^T U^{T−s}V(s)U^sξ₀ ds` by composite Simpson.
pub fn born_solution(
    sys: &ControlSystem,
    v_path: &(dyn Fn(f64) -> ComplexMatrix + Sync),
    xi0: &[C64],
    t: f64,
    nodes: usize,
) -> Result<BornTrajectory> {
    check_state(xi0, sys.dim())?;
    check_nodes(nodes)?;
    check_path(sys, v_path, t, nodes)?;
    let free = FreeEvolution::new(sys)?;
    let coarse = simpson(&free, v_path, xi0, t, nodes)?;
    let fine = simpson(&free, v_path, xi0, t, 2 * nodes - 1)?;
    let finer = simpson(&free, v_path, xi0, t, 4 * nodes - 3)?;
    let e1 = vector::norm(&vector::sub(&fine, &coarse));
    let e2 = vector::norm(&vector::sub(&finer, &fine));
    let floor = 1e-13 * (1.0 + vector::norm(&fine));
    if e2 > e1 && e2 > floor {
        return Err(Error::QuadratureDiverged { coarse: e1, fine: e2 });
    }
    let final_state = vector::add(&free.apply(t, xi0), &coarse);
    Ok(BornTrajectory { final_state, quadrature_nodes: nodes, estimated_error: e1 * 16.0 / 15.0 })
}

/// The integral term `Ψ(V) = ∫₀^T U^{T−s}V(s)U^sξ₀ ds` alone.
pub fn psi_map(
    sys: &ControlSystem,
    v_path: &(dyn Fn(f64) -> ComplexMatrix + Sync),
    xi0: &[C64],
    t: f64,
    nodes: usize,
) -> Result<Vec<C64>> {
    check_state(xi0, sys.dim())?;
    check_nodes(nodes)?;
    check_path(sys, v_path, t, nodes)?;
    let free = FreeEvolution::new(sys)?;
    simpson(&free, v_path, xi0, t, nodes)
}

fn matrix_power(a: &ComplexMatrix, mut k: u64) -> ComplexMatrix {
    let mut result = ComplexMatrix::identity(a.dim());
    let mut base = a.clone();
    while k > 0 {
        if k & 1 == 1 {
            result = &result * &base;
        }
        k >>= 1;
        if k > 0 {
            base = &base * &base;
        }
    }
    result
}

/// `(e^{ta/n} e^{tb/n})ⁿ`.
pub fn trotter_product(a: &ComplexMatrix, b: &ComplexMatrix, t: f64, n: usize) -> Result<ComplexMatrix> {
    a.check_same_dim(b)?;
    if n == 0 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    let s = t / n as f64;
    let step = &expm_skew(&a.scale_real(s))? * &expm_skew(&b.scale_real(s))?;
    Ok(matrix_power(&step, n as u64))
}

/// `(e^{−sa} e^{−sb} e^{sa} e^{sb})^{n²}` with `s = √t / n`, which tends to `e^{t[a,b]}`.
pub fn commutator_product(a: &ComplexMatrix, b: &ComplexMatrix, t: f64, n: usize) -> Result<ComplexMatrix> {
    a.check_same_dim(b)?;
    if !(t > 0.0) || n == 0 {
        return Err(Error::InvalidArgument(format!("need t > 0 and n ≥ 1, got t = {t}, n = {n}")));
    }
    let s = t.sqrt() / n as f64;
    let ea = expm_skew(&a.scale_real(s))?;
    let eb = expm_skew(&b.scale_real(s))?;
    let step = &(&(&ea.adjoint() * &eb.adjoint()) * &ea) * &eb;
    Ok(matrix_power(&step, (n * n) as u64))
}

/// `(n, error)` rows of a product-formula study.
pub fn product_study_csv(rows: &[(usize, f64)]) -> String {
    let mut out = String::from("n,error\n");
    for (n, e) in rows {
        out.push_str(&format!("{n},{}\n", fmt17(*e)));
    }
    out
}

/// One sampled endpoint.
#[derive(Debug, Clone)]
pub struct ReachableState {
    pub seed: u64,
    pub control: PiecewiseConstantControl,
    pub unitary: ComplexMatrix,
    pub state: Vec<C64>,
}

#[derive(Debug, Clone)]
pub struct ReachableSample {
    pub t: f64,
    pub states: Vec<ReachableState>,
}

/// Random admissible control: 1–8 segments at sorted uniform breakpoints,
/// values uniform in `[−N, N]`.
pub fn random_control(num_controls: usize, t: f64, n_max: f64, seed: u64) -> Result<PiecewiseConstantControl> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let segments: usize = rng.random_range(1..=8);
    let mut inner: Vec<f64> = (0..segments - 1).map(|_| rng.random::<f64>() * t).collect();
    inner.sort_by(f64::total_cmp);
    let mut breakpoints = vec![0.0];
    breakpoints.extend(inner);
    breakpoints.push(t);
    breakpoints.dedup();
    let count = breakpoints.len() - 1;
    let values = (0..count)
        .map(|_| {
            (0..num_controls)
                .map(|_| if n_max > 0.0 { rng.random_range(-n_max..=n_max) } else { 0.0 })
                .collect()
        })
        .collect();
    PiecewiseConstantControl::new(breakpoints, values, n_max)
}

/// Endpoints of `samples` random controls; sample `k` uses seed `seed + k`.
pub fn sample_reachable(
    sys: &ControlSystem,
    xi0: &[C64],
    t: f64,
    n_max: f64,
    samples: usize,
    seed: u64,
) -> Result<ReachableSample> {
    check_state(xi0, sys.dim())?;
    if samples == 0 || !(t > 0.0) {
        return Err(Error::InvalidArgument("need samples ≥ 1 and T > 0".into()));
    }
    let states = (0..samples as u64)
        .into_par_iter()
        .map(|k| {
            let s = seed.wrapping_add(k);
            let control = random_control(sys.controls().len(), t, n_max, s)?;
            let unitary = pwc_unitary(sys, &control)?;
            let state = unitary.apply(xi0);
            Ok(ReachableState { seed: s, control, unitary, state })
        })
        .collect::<Result<_>>()?;
    Ok(ReachableSample { t, states })
}

/// `‖ξ_ext(T′) − U^{T′−T} ξ(T)‖` for the control extended by a zero segment.
pub fn zero_extension_residual(
    sys: &ControlSystem,
    sample: &ReachableState,
    xi0: &[C64],
    t_end: f64,
) -> Result<f64> {
    let ext = sample.control.extended_by_zero(t_end)?;
    let again = propagate_pwc(sys, &ext, xi0)?;
    let free = FreeEvolution::new(sys)?;
    let expected = free.apply(t_end - sample.control.duration(), &sample.state);
    Ok(vector::norm(&vector::sub(&again, &expected)))
}

impl ReachableSample {
    pub fn to_csv(&self) -> String {
        let n = self.states.first().map(|s| s.state.len()).unwrap_or(0);
        let mut out = String::from("seed,segment_count,T");
        for k in 0..n {
            out.push_str(&format!(",final_re_{k}"));
        }
        for k in 0..n {
            out.push_str(&format!(",final_im_{k}"));
        }
        out.push('\n');
        for s in &self.states {
            out.push_str(&format!("{},{},{}", s.seed, s.control.segment_count(), fmt17(self.t)));
            for c in &s.state {
                out.push_str(&format!(",{}", fmt17(c.re)));
            }
            for c in &s.state {
                out.push_str(&format!(",{}", fmt17(c.im)));
            }
            out.push('\n');
        }
        out
    }
}
