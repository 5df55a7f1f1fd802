//! Extreme eigenpairs of real symmetric tridiagonal matrices.
//!
//! The largest eigenvalue is located by Sturm-count bisection, the
//! eigenvector by inverse iteration with a partially pivoted tridiagonal
//! solve.

use crate::error::{Error, Result};

/// Real symmetric tridiagonal matrix given by its diagonal and off-diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct SymTridiagonal {
    diag: Vec<f64>,
    off: Vec<f64>,
}

impl SymTridiagonal {
    pub fn new(diag: Vec<f64>, off: Vec<f64>) -> Result<Self> {
        if diag.is_empty() {
            return Err(Error::InvalidArgument("empty tridiagonal matrix".into()));
        }
        if off.len() + 1 != diag.len() {
            return Err(Error::DimensionMismatch {
                expected: diag.len() - 1,
                got: off.len(),
            });
        }
        Ok(Self { diag, off })
    }

    /// Zero diagonal with constant off-diagonal `c`.
    pub fn constant_coupling(size: usize, c: f64) -> Result<Self> {
        Self::new(vec![0.0; size], vec![c; size.saturating_sub(1)])
    }

    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    pub fn mul_vec(&self, v: &[f64]) -> Vec<f64> {
        let n = self.len();
        (0..n)
            .map(|i| {
                let mut s = self.diag[i] * v[i];
                if i > 0 {
                    s += self.off[i - 1] * v[i - 1];
                }
                if i + 1 < n {
                    s += self.off[i] * v[i + 1];
                }
                s
            })
            .collect()
    }

    fn gershgorin(&self) -> (f64, f64) {
        let n = self.len();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let mut r = 0.0;
            if i > 0 {
                r += self.off[i - 1].abs();
            }
            if i + 1 < n {
                r += self.off[i].abs();
            }
            lo = lo.min(self.diag[i] - r);
            hi = hi.max(self.diag[i] + r);
        }
        (lo, hi)
    }

    /// Number of eigenvalues strictly less than `x`.
    pub fn count_below(&self, x: f64) -> usize {
        let mut count = 0;
        let mut q = 1.0;
        for i in 0..self.len() {
            let b2 = if i == 0 {
                0.0
            } else {
                self.off[i - 1] * self.off[i - 1]
            };
            q = self.diag[i] - x - if i == 0 { 0.0 } else { b2 / q };
            if q == 0.0 {
                q = -f64::EPSILON * (x.abs() + 1.0);
            }
            if q < 0.0 {
                count += 1;
            }
        }
        count
    }

    pub fn largest_eigenvalue(&self) -> f64 {
        let n = self.len();
        let (mut lo, mut hi) = self.gershgorin();
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.count_below(mid) == n {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        0.5 * (lo + hi)
    }

    /// Largest eigenvalue and a unit eigenvector with nonnegative sum.
    pub fn largest_eigenpair(&self) -> (f64, Vec<f64>) {
        let n = self.len();
        let lambda = self.largest_eigenvalue();
        if n == 1 {
            return (lambda, vec![1.0]);
        }
        let scale = lambda.abs().max(1.0);
        let shift = lambda + 4.0 * f64::EPSILON * scale;
        let mut v = vec![1.0 / (n as f64).sqrt(); n];
        for _ in 0..4 {
            let mut y = self.solve_shifted(shift, &v);
            let norm = y.iter().map(|a| a * a).sum::<f64>().sqrt();
            y.iter_mut().for_each(|a| *a /= norm);
            v = y;
        }
        if v.iter().sum::<f64>() < 0.0 {
            v.iter_mut().for_each(|a| *a = -*a);
        }
        (lambda, v)
    }

    /// Solves `(T − σI) y = rhs` by Gaussian elimination with partial pivoting.
    fn solve_shifted(&self, sigma: f64, rhs: &[f64]) -> Vec<f64> {
        let n = self.len();
        let tiny = f64::EPSILON * self.gershgorin().1.abs().max(1.0);
        // Rows hold (sub, diag, sup, sup2) after pivoting.
        let mut dl: Vec<f64> = self.off.clone();
        let mut d: Vec<f64> = self.diag.iter().map(|a| a - sigma).collect();
        let mut du: Vec<f64> = self.off.clone();
        let mut du2 = vec![0.0; n.saturating_sub(2)];
        let mut b = rhs.to_vec();

        for i in 0..n - 1 {
            if d[i].abs() >= dl[i].abs() {
                if d[i] == 0.0 {
                    d[i] = tiny;
                }
                let fact = dl[i] / d[i];
                d[i + 1] -= fact * du[i];
                b[i + 1] -= fact * b[i];
                dl[i] = 0.0;
            } else {
                let fact = d[i] / dl[i];
                d[i] = dl[i];
                let temp = d[i + 1];
                d[i + 1] = du[i] - fact * temp;
                if i + 2 < n {
                    du2[i] = du[i + 1];
                    du[i + 1] = -fact * du2[i];
                }
                du[i] = temp;
                b.swap(i, i + 1);
                b[i + 1] -= fact * b[i];
            }
        }
        if d[n - 1] == 0.0 {
            d[n - 1] = tiny;
        }
        let mut y = vec![0.0; n];
        y[n - 1] = b[n - 1] / d[n - 1];
        if n >= 2 {
            y[n - 2] = (b[n - 2] - du[n - 2] * y[n - 1]) / d[n - 2];
        }
        for i in (0..n.saturating_sub(2)).rev() {
            y[i] = (b[i] - du[i] * y[i + 1] - du2[i] * y[i + 2]) / d[i];
        }
        y
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn constant_coupling_matches_closed_form() {
        for size in 1..=60 {
            let t = SymTridiagonal::constant_coupling(size, 0.5).unwrap();
            let (lambda, v) = t.largest_eigenpair();
            let expected = (PI / (size as f64 + 1.0)).cos();
            assert!((lambda - expected).abs() < 1e-13, "size {size}");
            let tv = t.mul_vec(&v);
            let resid = tv
                .iter()
                .zip(&v)
                .map(|(a, b)| (a - lambda * b).abs())
                .fold(0.0, f64::max);
            assert!(resid < 1e-12, "size {size} resid {resid}");
            assert!(v.iter().all(|&a| a > 0.0));
        }
    }

    #[test]
    fn general_matrix_against_dense_solver() {
        let diag = vec![2.0, -1.0, 0.5, 3.0, 1.0];
        let off = vec![1.0, -0.3, 2.0, 0.7];
        let t = SymTridiagonal::new(diag.clone(), off.clone()).unwrap();
        let mut dense = nalgebra::DMatrix::<f64>::zeros(5, 5);
        for i in 0..5 {
            dense[(i, i)] = diag[i];
            if i < 4 {
                dense[(i, i + 1)] = off[i];
                dense[(i + 1, i)] = off[i];
            }
        }
        let eig = nalgebra::SymmetricEigen::new(dense);
        let max = eig.eigenvalues.iter().cloned().fold(f64::MIN, f64::max);
        let (lambda, v) = t.largest_eigenpair();
        assert!((lambda - max).abs() < 1e-12);
        let tv = t.mul_vec(&v);
        for i in 0..5 {
            assert!((tv[i] - lambda * v[i]).abs() < 1e-11);
        }
        assert_eq!(t.count_below(max + 1e-9), 5);
    }

    #[test]
    fn rejects_bad_shapes() {
        assert!(SymTridiagonal::new(vec![], vec![]).is_err());
        assert!(SymTridiagonal::new(vec![1.0, 2.0], vec![]).is_err());
    }
}
