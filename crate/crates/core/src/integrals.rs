//! Class-function integrals over SU(2) and U(1).
//!
//! Every integrand used here is a trigonometric polynomial in the class
//! angle, so the equispaced periodic rule on `[0, 2π)` is exact up to
//! rounding once the node count exceeds the polynomial degree.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::su2::{character_dim, TWO_PI};

pub const MIN_NODES: usize = 16;

/// Equispaced periodic quadrature on `[0, 2π)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QuadratureSpec {
    node_count: usize,
}

impl QuadratureSpec {
    pub fn new(node_count: usize) -> Result<Self> {
        if node_count < MIN_NODES {
            return Err(Error::InvalidArgument(format!(
                "quadrature needs at least {MIN_NODES} nodes, got {node_count}"
            )));
        }
        Ok(Self { node_count })
    }

    /// Smallest default rule that integrates a degree-`degree` integrand exactly.
    pub fn for_degree(degree: usize) -> Self {
        Self {
            node_count: (2 * degree + 16).max(MIN_NODES),
        }
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn nodes(&self) -> impl Iterator<Item = f64> + '_ {
        let h = TWO_PI / self.node_count as f64;
        (0..self.node_count).map(move |i| i as f64 * h)
    }
}

/// `∫₀^{2π} f(θ) (1/π) sin²(θ/2) dθ`: the Haar integral of a class function.
pub fn class_integral<F: Fn(f64) -> f64>(f: F, spec: &QuadratureSpec) -> f64 {
    let w = 2.0 / spec.node_count as f64;
    spec.nodes()
        .map(|t| {
            let s = (0.5 * t).sin();
            f(t) * s * s
        })
        .sum::<f64>()
        * w
}

/// `(1/2π) ∫₀^{2π} f(θ) dθ` for a complex integrand.
pub fn circle_mean<F: Fn(f64) -> Complex64>(f: F, spec: &QuadratureSpec) -> Complex64 {
    let w = 1.0 / spec.node_count as f64;
    spec.nodes().map(f).sum::<Complex64>() * w
}

/// `∫ d(I, g) χ^{2k}(g) χ^{2l}(g) μ(dg)` over SU(2).
pub fn su2_error_kernel(k: usize, l: usize) -> Result<f64> {
    if k == 0 || l == 0 {
        return Err(Error::InvalidArgument("kernel indices start at 1".into()));
    }
    Ok(su2_dim_kernel(2 * k, 2 * l))
}

/// Same integral for arbitrary irrep dimensions `a`, `b ≥ 1`.
pub(crate) fn su2_dim_kernel(a: usize, b: usize) -> f64 {
    let spec = QuadratureSpec::for_degree(a + b + 4);
    class_integral(
        |t| {
            let s = (0.5 * t).sin();
            s * s * character_dim(a, t) * character_dim(b, t)
        },
        &spec,
    )
}

/// `∫ d(I, g) |χ^j(g)|² μ(dg)`.
pub fn su2_single_irrep_integral(j: usize) -> Result<f64> {
    if j == 0 {
        return Err(Error::InvalidArgument(
            "irrep dimension must be >= 1".into(),
        ));
    }
    Ok(su2_dim_kernel(j, j))
}

/// `(1/2π) ∫₀^{2π} (1 − |cos(θ/2)|²) e^{ikθ} e^{−ilθ} dθ` as a complex number.
pub fn phase_error_kernel_complex(k: usize, l: usize) -> Complex64 {
    let spec = QuadratureSpec::for_degree(k.abs_diff(l) + 2);
    let m = k as f64 - l as f64;
    circle_mean(
        |t| {
            let chi2 = (0.5 * t).cos();
            Complex64::from_polar(1.0 - chi2 * chi2, m * t)
        },
        &spec,
    )
}

/// Real part of [`phase_error_kernel_complex`]; the imaginary part vanishes.
pub fn phase_error_kernel(k: usize, l: usize) -> f64 {
    phase_error_kernel_complex(k, l).re
}

/// `½δ_{kl} − ¼δ_{k,l−1} − ¼δ_{k−1,l}`.
pub fn delta_pattern(k: usize, l: usize) -> f64 {
    match k.abs_diff(l) {
        0 => 0.5,
        1 => -0.25,
        _ => 0.0,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn class_integral_examples() {
        let spec = QuadratureSpec::new(64).unwrap();
        assert!((class_integral(|_| 1.0, &spec) - 1.0).abs() < 1e-14);
        assert!((class_integral(|t| (0.5 * t).sin().powi(2), &spec) - 0.75).abs() < 1e-14);
        assert!((class_integral(|t| t.cos(), &spec) + 0.5).abs() < 1e-14);
        assert!(QuadratureSpec::new(8).is_err());
    }

    #[test]
    fn exact_below_node_count() {
        // cos(mθ)·sin²(θ/2) has degree m + 1; with N nodes it is exact while m + 1 < N.
        let n = 32;
        let spec = QuadratureSpec::new(n).unwrap();
        for m in 0..(n - 2) {
            let got = class_integral(|t| (m as f64 * t).cos(), &spec);
            let expected = match m {
                0 => 1.0,
                1 => -0.5,
                _ => 0.0,
            };
            assert!((got - expected).abs() < 1e-13, "m {m}: {got}");
        }
    }

    #[test]
    fn kernel_examples() {
        assert!((su2_error_kernel(3, 3).unwrap() - 0.5).abs() < 1e-13);
        assert!((su2_error_kernel(3, 4).unwrap() + 0.25).abs() < 1e-13);
        assert!(su2_error_kernel(2, 5).unwrap().abs() < 1e-13);
        assert!(su2_error_kernel(0, 1).is_err());

        assert!((su2_single_irrep_integral(1).unwrap() - 0.75).abs() < 1e-13);
        assert!((su2_single_irrep_integral(2).unwrap() - 0.5).abs() < 1e-13);
        assert!((su2_single_irrep_integral(40).unwrap() - 0.5).abs() < 1e-12);

        assert!((phase_error_kernel(5, 5) - 0.5).abs() < 1e-15);
        assert!((phase_error_kernel(5, 6) + 0.25).abs() < 1e-15);
        assert!(phase_error_kernel(2, 7).abs() < 1e-15);
        assert!(phase_error_kernel_complex(3, 9).im.abs() < 1e-14);
    }

    #[test]
    fn doubling_nodes_is_stable() {
        for &(a, b) in &[(2, 4), (6, 6), (10, 12), (7, 9)] {
            let base = QuadratureSpec::for_degree(a + b + 4);
            let doubled = QuadratureSpec::new(2 * base.node_count()).unwrap();
            let f = |t: f64| {
                let s = (0.5 * t).sin();
                s * s * character_dim(a, t) * character_dim(b, t)
            };
            assert!((class_integral(f, &base) - class_integral(f, &doubled)).abs() < 1e-13);
        }
    }
}
