//! Numerical laboratory for bilinear control systems whose drift and
//! control operators are affiliated with a finite von Neumann algebra,
//! modeled by block-diagonal matrix algebras.
//!
//! Modules, bottom-up:
//! - [`linalg`]: dense complex matrices, Jacobi eigensolver, functional calculus.
//! - [`algebra`]: block algebras, traces, commutants, conditional expectations, GNS.
//! - [`drift`]: the `q_z` compactification, compression and reconstruction of a drift.
//! - [`lie`]: dynamical Lie algebras and controllability verdicts.
//! - [`propagate`]: control propagation, Born solutions, product formulas, reachable sets.
//! - [`koopman`]: truncated Koopman models of torus rotations.
//! - [`systems`]: Jaynes–Cummings and harmonic-oscillator models.
//! - [`experiment`]: JSON-configured batch experiments behind the `vnlab` binary.

pub mod algebra;
pub mod drift;
pub mod error;
pub mod experiment;
pub mod koopman;
pub mod lie;
pub mod linalg;
pub mod propagate;
pub mod random;
pub mod systems;
pub mod tolerances;

pub use error::{Error, Result};
pub use linalg::{ComplexMatrix, C64};
pub use tolerances::Tolerances;
