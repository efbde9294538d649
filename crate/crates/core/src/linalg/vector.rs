//! Small helpers for complex vectors stored as `Vec<C64>`.

use super::matrix::{C64, ZERO};

/// `⟨x, y⟩ = Σ x_i conj(y_i)` (linear in the first slot).
pub fn inner(x: &[C64], y: &[C64]) -> C64 {
    x.iter().zip(y).map(|(a, b)| a * b.conj()).sum()
}

pub fn norm(x: &[C64]) -> f64 {
    x.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
}

pub fn normalized(x: &[C64]) -> Vec<C64> {
    let n = norm(x);
    x.iter().map(|c| c / n).collect()
}

pub fn sub(x: &[C64], y: &[C64]) -> Vec<C64> {
    x.iter().zip(y).map(|(a, b)| a - b).collect()
}

pub fn add(x: &[C64], y: &[C64]) -> Vec<C64> {
    x.iter().zip(y).map(|(a, b)| a + b).collect()
}

pub fn scale(x: &[C64], s: C64) -> Vec<C64> {
    x.iter().map(|c| c * s).collect()
}

pub fn basis(n: usize, k: usize) -> Vec<C64> {
    let mut v = vec![ZERO; n];
    v[k] = C64::new(1.0, 0.0);
    v
}
