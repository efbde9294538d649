//! JSON-configured batch experiments.
//!
//! A config is one JSON object with a `kind` field, the kind's own fields,
//! and optional `seed`, `output_dir` and `tolerances`. Every artifact is
//! computed before anything is written, so a failed run leaves no files.

use std::fs;
use std::path::{Path, PathBuf};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::algebra::{check_affiliated, BlockAlgebra};
use crate::drift::{basis_probes, convergence_sweep, fmt17};
use crate::error::Error;
use crate::koopman::{self, TorusModel};
use crate::lie::{larc_verdict_with, ControlSystem};
use crate::linalg::{expm_skew, vector, ComplexMatrix, C64};
use crate::propagate::{
    born_solution, commutator_product, product_study_csv, sample_reachable, trotter_product,
    zero_extension_residual,
};
use crate::random;
use crate::systems::{self, JcVariant};
use crate::tolerances::Tolerances;

pub const VERSION: &str = concat!("v", env!("CARGO_PKG_VERSION"));

#[derive(Debug, Clone, Deserialize)]
pub struct ExperimentConfig {
    #[serde(flatten)]
    pub experiment: Experiment,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub output_dir: Option<PathBuf>,
    #[serde(default)]
    pub tolerances: Tolerances,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Experiment {
    DriftApprox(DriftApproxConfig),
    LieRank(LieRankConfig),
    ProductFormula(ProductFormulaConfig),
    Born(BornConfig),
    Reachable(ReachableConfig),
    Koopman(KoopmanConfig),
    JaynesCummings(JaynesCummingsConfig),
    Oscillator(OscillatorConfig),
}

#[derive(Debug, Clone, Deserialize)]
pub struct DriftApproxConfig {
    pub model: TorusModel,
    /// Number of dyadic refinement levels, the last being the identity.
    pub levels: usize,
    pub z_grid: Vec<f64>,
}

#[derive(Debug, Clone, Deserialize)]
pub struct LieRankConfig {
    pub algebra: BlockAlgebra,
    /// Skew-Hermitian `iV₀`.
    pub drift: ComplexMatrix,
    /// Skew-Hermitian `iV_j`.
    pub controls: Vec<ComplexMatrix>,
}

#[derive(Debug, Clone, Deserialize)]
pub struct ProductFormulaConfig {
    pub dim: usize,
    pub n_ladder: Vec<usize>,
    pub pairs: usize,
    #[serde(default)]
    pub t: Option<f64>,
}

#[derive(Debug, Clone, Deserialize)]
pub struct BornConfig {
    /// Diagonal of `V₀`; the path is `V(s) = s·D` for a seeded real diagonal `D`.
    pub drift_spectrum: Vec<f64>,
    pub t: f64,
    pub nodes: usize,
}

#[derive(Debug, Clone, Deserialize)]
pub struct ReachableConfig {
    pub algebra: BlockAlgebra,
    pub drift: ComplexMatrix,
    pub controls: Vec<ComplexMatrix>,
    pub t: f64,
    pub n_max: f64,
    pub samples: usize,
    /// Initial state as `[re, im]` pairs; defaults to the first basis vector.
    #[serde(default)]
    pub xi0: Option<Vec<[f64; 2]>>,
    /// Extra time for the zero-extension check.
    #[serde(default)]
    pub extension: Option<f64>,
}

#[derive(Debug, Clone, Deserialize)]
pub struct KoopmanConfig {
    pub model: TorusModel,
    #[serde(default)]
    pub t_samples: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Deserialize)]
pub struct JaynesCummingsConfig {
    pub n_max: usize,
    pub omega_a: f64,
    pub omega_i: f64,
    pub omega_c: f64,
    #[serde(default)]
    pub variant: Option<JcVariant>,
}

#[derive(Debug, Clone, Deserialize)]
pub struct OscillatorConfig {
    pub n_max: usize,
    #[serde(default)]
    pub interior_dim: Option<usize>,
}

/// One entry of `vnlab list`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KindInfo {
    pub name: &'static str,
    pub description: &'static str,
    pub required: &'static [&'static str],
    pub randomized: bool,
}

pub const KINDS: [KindInfo; 8] = [
    KindInfo {
        name: "drift-approx",
        description: "SRT distance of the compressed torus drift over a z grid and a dyadic chain",
        required: &["model", "levels", "z_grid"],
        randomized: false,
    },
    KindInfo {
        name: "lie-rank",
        description: "dynamical Lie algebra dimension against u(M) and the factor test",
        required: &["algebra", "drift", "controls"],
        randomized: false,
    },
    KindInfo {
        name: "product-formula",
        description: "Trotter and commutator product errors for random skew pairs",
        required: &["dim", "n_ladder", "pairs", "seed"],
        randomized: true,
    },
    KindInfo {
        name: "born",
        description: "Born solution by Simpson quadrature with a two-grid error estimate",
        required: &["drift_spectrum", "t", "nodes", "seed"],
        randomized: true,
    },
    KindInfo {
        name: "reachable",
        description: "endpoints of random admissible piecewise-constant controls",
        required: &["algebra", "drift", "controls", "t", "n_max", "samples", "seed"],
        randomized: true,
    },
    KindInfo {
        name: "koopman",
        description: "Koopman von Neumann algebra of a torus rotation and generator affiliation",
        required: &["model"],
        randomized: false,
    },
    KindInfo {
        name: "jaynes-cummings",
        description: "commutation of the Jaynes-Cummings Hamiltonians with the symmetry generator",
        required: &["n_max", "omega_a", "omega_i", "omega_c"],
        randomized: false,
    },
    KindInfo {
        name: "oscillator",
        description: "bracket identities, closure dimension and commutant for the oscillator",
        required: &["n_max"],
        randomized: false,
    },
];

/// Text listing, one kind per line.
pub fn list_experiments() -> String {
    let mut out = String::new();
    for k in KINDS {
        out.push_str(&format!("{:<16} {}\n{:<16} required: {}\n", k.name, k.description, "", k.required.join(", ")));
    }
    out
}

#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error("invalid config: {0}")]
    Validation(String),
    #[error("{0}")]
    Numerical(Error),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
}

impl RunError {
    /// 2 for validation, 3 for numerical failure, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Validation(_) => 2,
            RunError::Numerical(_) => 3,
            RunError::Io(_) => 1,
        }
    }
}

impl From<Error> for RunError {
    fn from(e: Error) -> Self {
        match e {
            Error::NoConvergence { .. }
            | Error::QuadratureDiverged { .. }
            | Error::SpectrumHit { .. }
            | Error::NonFinite { .. }
            | Error::DomainError { .. }
            | Error::ClampExceeded { .. }
            | Error::NotNormal { .. } => RunError::Numerical(e),
            other => RunError::Validation(other.to_string()),
        }
    }
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self, RunError> {
        let cfg: Self = serde_json::from_str(text).map_err(|e| RunError::Validation(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn kind(&self) -> &'static str {
        let idx = match &self.experiment {
            Experiment::DriftApprox(_) => 0,
            Experiment::LieRank(_) => 1,
            Experiment::ProductFormula(_) => 2,
            Experiment::Born(_) => 3,
            Experiment::Reachable(_) => 4,
            Experiment::Koopman(_) => 5,
            Experiment::JaynesCummings(_) => 6,
            Experiment::Oscillator(_) => 7,
        };
        KINDS[idx].name
    }

    pub fn validate(&self) -> Result<(), RunError> {
        let info = KINDS.iter().find(|k| k.name == self.kind()).unwrap();
        if info.randomized && self.seed.is_none() {
            return Err(RunError::Validation(format!("{} requires a seed", info.name)));
        }
        let bad = |m: &str| Err(RunError::Validation(m.to_string()));
        match &self.experiment {
            Experiment::DriftApprox(c) => {
                if c.levels == 0 || c.z_grid.is_empty() || c.z_grid.iter().any(|z| !(*z > 0.0)) {
                    return bad("drift-approx needs levels ≥ 1 and a nonempty grid of positive z");
                }
            }
            Experiment::ProductFormula(c) => {
                if c.dim == 0 || c.pairs == 0 || c.n_ladder.is_empty() || c.n_ladder.contains(&0) {
                    return bad("product-formula needs dim, pairs ≥ 1 and a ladder of positive n");
                }
            }
            Experiment::Born(c) => {
                if c.drift_spectrum.is_empty() || !(c.t > 0.0) || c.nodes < 3 || c.nodes % 2 == 0 {
                    return bad("born needs a drift spectrum, t > 0 and an odd node count ≥ 3");
                }
            }
            Experiment::Reachable(c) => {
                if c.samples == 0 || !(c.t > 0.0) || !(c.n_max >= 0.0) {
                    return bad("reachable needs samples ≥ 1, t > 0 and n_max ≥ 0");
                }
            }
            Experiment::Koopman(c) => {
                if c.t_samples.as_ref().is_some_and(|t| t.is_empty()) {
                    return bad("t_samples must be nonempty when given");
                }
            }
            Experiment::LieRank(_) | Experiment::JaynesCummings(_) | Experiment::Oscillator(_) => {}
        }
        Ok(())
    }
}

/// In-memory results of one run.
#[derive(Debug, Clone)]
pub struct RunOutput {
    pub summary: Value,
    pub files: Vec<(String, String)>,
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serializable report")
}

/// Runs an experiment without touching the filesystem.
pub fn execute(cfg: &ExperimentConfig) -> Result<RunOutput, RunError> {
    let tol = &cfg.tolerances;
    let seed = cfg.seed.unwrap_or(0);
    let mut files = Vec::new();
    let summary = match &cfg.experiment {
        Experiment::DriftApprox(c) => {
            let v0 = koopman::generator(&c.model);
            let chain = koopman::dyadic_chain(&c.model, c.levels)?;
            let probes = basis_probes(v0.dim());
            let table = convergence_sweep(&v0, &c.z_grid, &chain, &probes)?;
            files.push(("sweep.csv".into(), table.to_csv()));
            json!({
                "bottom_right": table.bottom_right(),
                "rows_non_increasing": table.rows_non_increasing(0.0),
                "distances": table.distances,
            })
        }
        Experiment::LieRank(c) => {
            let sys = ControlSystem::new_with(c.drift.clone(), c.controls.clone(), c.algebra.clone(), tol)?;
            to_value(&larc_verdict_with(&sys, tol)?)
        }
        Experiment::ProductFormula(c) => {
            let t = c.t.unwrap_or(1.0);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut pairs = Vec::new();
            for k in 0..c.pairs {
                let a = random::random_unit_skew(c.dim, &mut rng);
                let b = random::random_unit_skew(c.dim, &mut rng);
                let exact = expm_skew(&(&a + &b).scale_real(t))?;
                let target = expm_skew(&a.commutator(&b).scale_real(t))?;
                let mut trotter = Vec::new();
                let mut comm = Vec::new();
                for &n in &c.n_ladder {
                    trotter.push((n, (&trotter_product(&a, &b, t, n)? - &exact).frobenius_norm()));
                    comm.push((n, (&commutator_product(&a, &b, t, n)? - &target).frobenius_norm()));
                }
                files.push((format!("trotter_{k}.csv"), product_study_csv(&trotter)));
                files.push((format!("commutator_{k}.csv"), product_study_csv(&comm)));
                let ratios: Vec<f64> = trotter.windows(2).map(|w| w[1].1 / w[0].1).collect();
                pairs.push(json!({
                    "trotter": trotter.iter().map(|r| r.1).collect::<Vec<_>>(),
                    "trotter_ratios": ratios,
                    "commutator": comm.iter().map(|r| r.1).collect::<Vec<_>>(),
                }));
            }
            json!({ "t": t, "n_ladder": c.n_ladder, "pairs": pairs })
        }
        Experiment::Born(c) => {
            let n = c.drift_spectrum.len();
            let algebra = BlockAlgebra::diagonal(n);
            let sys = ControlSystem::from_hamiltonians(&ComplexMatrix::from_real_diag(&c.drift_spectrum), &[], algebra)?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let d: Vec<f64> = (0..n).map(|_| random::gaussian(&mut rng)).collect();
            let dm = ComplexMatrix::from_real_diag(&d);
            let xi0 = random::random_unit_vector(n, &mut rng);
            let traj = born_solution(&sys, &|s| dm.scale_real(s), &xi0, c.t, c.nodes)?;
            files.push(("state.csv".into(), state_csv(&traj.final_state)));
            json!({
                "nodes": traj.quadrature_nodes,
                "estimated_error": traj.estimated_error,
                "path_diagonal": d,
            })
        }
        Experiment::Reachable(c) => {
            let sys = ControlSystem::new_with(c.drift.clone(), c.controls.clone(), c.algebra.clone(), tol)?;
            let xi0 = match &c.xi0 {
                Some(v) => v.iter().map(|p| C64::new(p[0], p[1])).collect(),
                None => vector::basis(sys.dim(), 0),
            };
            let sample = sample_reachable(&sys, &xi0, c.t, c.n_max, c.samples, seed)?;
            let extra = c.extension.unwrap_or(0.5 * c.t);
            let mut worst_ext = 0.0f64;
            let mut worst_aff = 0.0f64;
            for s in &sample.states {
                worst_ext = worst_ext.max(zero_extension_residual(&sys, s, &xi0, c.t + extra)?);
                worst_aff = worst_aff.max(check_affiliated(&s.unitary, sys.algebra()).max_commutator_residual);
            }
            files.push(("trajectories.csv".into(), sample.to_csv()));
            json!({
                "samples": c.samples,
                "zero_extension_residual": worst_ext,
                "max_affiliation_residual": worst_aff,
            })
        }
        Experiment::Koopman(c) => {
            let algebra = match &c.t_samples {
                Some(t) => koopman::koopman_algebra(&c.model, t)?,
                None => koopman::koopman_algebra_default(&c.model)?,
            };
            let g = koopman::generator(&c.model);
            let cert = check_affiliated(&g, &algebra);
            files.push((
                "algebra.json".into(),
                serde_json::to_string_pretty(&algebra).expect("serializable algebra"),
            ));
            json!({
                "ambient_dim": c.model.ambient_dim(),
                "blocks": algebra.sorted_blocks(),
                "generator_affiliated": cert.verdict,
                "generator_residual": cert.max_commutator_residual,
            })
        }
        Experiment::JaynesCummings(c) => {
            let model = systems::build_jaynes_cummings_with(
                c.n_max,
                c.omega_a,
                c.omega_i,
                c.omega_c,
                c.variant.unwrap_or_default(),
            )?;
            to_value(&systems::verify_symmetry(&model)?)
        }
        Experiment::Oscillator(c) => {
            let model = match c.interior_dim {
                Some(m) => systems::oscillator::build_oscillator_with(c.n_max, m)?,
                None => systems::build_oscillator(c.n_max)?,
            };
            to_value(&systems::verify_oscillator_brackets(&model)?)
        }
    };
    Ok(RunOutput { summary, files })
}

fn state_csv(state: &[C64]) -> String {
    let mut out = String::from("index,re,im\n");
    for (k, c) in state.iter().enumerate() {
        out.push_str(&format!("{k},{},{}\n", fmt17(c.re), fmt17(c.im)));
    }
    out
}

/// Reads, validates and runs a config, then writes `result.json` and the CSVs.
pub fn run(config_path: &Path, out: Option<&Path>) -> Result<PathBuf, RunError> {
    let text = fs::read_to_string(config_path)
        .map_err(|e| RunError::Validation(format!("{}: {e}", config_path.display())))?;
    let cfg = ExperimentConfig::from_json(&text)?;
    let output = execute(&cfg)?;
    let dir = out
        .map(Path::to_path_buf)
        .or_else(|| cfg.output_dir.clone())
        .unwrap_or_else(|| PathBuf::from("vnlab-out"));
    fs::create_dir_all(&dir)?;
    let result = json!({
        "kind": cfg.kind(),
        "version": VERSION,
        "seed": cfg.seed,
        "tolerances": cfg.tolerances,
        "summary": output.summary,
        "artifacts": output.files.iter().map(|f| f.0.clone()).collect::<Vec<_>>(),
    });
    let mut body = serde_json::to_string_pretty(&result).expect("serializable result");
    body.push('\n');
    fs::write(dir.join("result.json"), body)?;
    for (name, content) in &output.files {
        fs::write(dir.join(name), content)?;
    }
    Ok(dir)
}

/// Sizes the global rayon pool from `TOOL_THREADS` when set.
pub fn configure_threads() {
    if let Some(n) = std::env::var("TOOL_THREADS").ok().and_then(|v| v.trim().parse::<usize>().ok()) {
        if n > 0 {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
}
