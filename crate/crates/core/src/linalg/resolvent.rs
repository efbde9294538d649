use super::matrix::{ComplexMatrix, C64, ONE, ZERO};
use crate::error::{Error, Result};
use crate::tolerances::Tolerances;

/// LU factorization with partial pivoting, `P A = L U`.
struct Lu {
    lu: ComplexMatrix,
    perm: Vec<usize>,
}

impl Lu {
    fn factor(mut a: ComplexMatrix, pivot_floor: f64) -> Result<Self> {
        let n = a.dim();
        let mut perm: Vec<usize> = (0..n).collect();
        for k in 0..n {
            let (p, pmag) = (k..n)
                .map(|i| (i, a[(i, k)].norm()))
                .max_by(|x, y| x.1.total_cmp(&y.1))
                .unwrap();
            if pmag <= pivot_floor {
                return Err(Error::SpectrumHit { op: "resolvent", pivot: pmag });
            }
            if p != k {
                for j in 0..n {
                    let tmp = a[(k, j)];
                    a[(k, j)] = a[(p, j)];
                    a[(p, j)] = tmp;
                }
                perm.swap(k, p);
            }
            let pivot = a[(k, k)];
            for i in k + 1..n {
                let f = a[(i, k)] / pivot;
                a[(i, k)] = f;
                if f == ZERO {
                    continue;
                }
                for j in k + 1..n {
                    let akj = a[(k, j)];
                    a[(i, j)] -= f * akj;
                }
            }
        }
        Ok(Self { lu: a, perm })
    }

    fn solve(&self, b: &[C64]) -> Vec<C64> {
        let n = self.lu.dim();
        let mut y: Vec<C64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            for j in 0..i {
                let l = self.lu[(i, j)];
                y[i] = y[i] - l * y[j];
            }
        }
        for i in (0..n).rev() {
            for j in i + 1..n {
                let u = self.lu[(i, j)];
                y[i] = y[i] - u * y[j];
            }
            y[i] /= self.lu[(i, i)];
        }
        y
    }

    fn inverse(&self) -> ComplexMatrix {
        let n = self.lu.dim();
        let mut inv = ComplexMatrix::zeros(n);
        let mut e = vec![ZERO; n];
        for j in 0..n {
            e.iter_mut().for_each(|x| *x = ZERO);
            e[j] = ONE;
            inv.set_column(j, &self.solve(&e));
        }
        inv
    }
}

/// `R_z(A) = (A − zI)⁻¹`.
pub fn resolvent(a: &ComplexMatrix, z: C64) -> Result<ComplexMatrix> {
    resolvent_with(a, z, &Tolerances::default())
}

pub fn resolvent_with(a: &ComplexMatrix, z: C64, tol: &Tolerances) -> Result<ComplexMatrix> {
    let n = a.dim();
    let shifted = a - &ComplexMatrix::identity(n).scale(z);
    let floor = tol.spectrum_hit * a.frobenius_norm().max(1.0);
    let lu = Lu::factor(shifted, floor)?;
    lu.inverse().ensure_finite("resolvent")
}

/// Solves `(A − zI) x = b`.
pub fn resolvent_apply(a: &ComplexMatrix, z: C64, b: &[C64]) -> Result<Vec<C64>> {
    let n = a.dim();
    let shifted = a - &ComplexMatrix::identity(n).scale(z);
    let floor = Tolerances::default().spectrum_hit * a.frobenius_norm().max(1.0);
    Ok(Lu::factor(shifted, floor)?.solve(b))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scalar_cases() {
        let r = resolvent(&ComplexMatrix::zeros(3), C64::new(-1.0, 0.0)).unwrap();
        assert!((&r - &ComplexMatrix::identity(3)).max_abs() < 1e-15);
        let r = resolvent(&ComplexMatrix::from_real_diag(&[2.0]), C64::new(1.0, 0.0)).unwrap();
        assert!((r[(0, 0)] - ONE).norm() < 1e-15);
    }

    #[test]
    fn eigenvalue_shift_is_rejected() {
        let a = ComplexMatrix::from_real_diag(&[1.0, 2.0]);
        assert!(matches!(
            resolvent(&a, C64::new(2.0, 0.0)),
            Err(Error::SpectrumHit { .. })
        ));
    }

    #[test]
    fn residual_on_skew_input() {
        let a = ComplexMatrix::from_fn(4, |i, j| {
            let x = (i as f64 + 1.0) * 0.3 - (j as f64) * 0.2;
            let y = (i * j) as f64 * 0.1;
            C64::new(x, y)
        });
        let skew = (&a - &a.adjoint()).scale_real(0.5);
        let z = C64::new(0.0, 25.0);
        let r = resolvent(&skew, z).unwrap();
        let shifted = &skew - &ComplexMatrix::identity(4).scale(z);
        assert!((&(&shifted * &r) - &ComplexMatrix::identity(4)).max_abs() < 1e-12);
    }
}
