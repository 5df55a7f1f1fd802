//! Covariant phase estimation.
//!
//! The unknown phase acts as `U_θ = Σ_k e^{ikθ}|u_k⟩⟨u_k|` on `d` levels and a
//! covariant POVM is generated by a seed matrix `T ≥ 0` with unit diagonal.
//! For an input `x` the mean error under the cost `sin²((θ − θ̂)/2)` is
//!
//! ```text
//! D(T, x) = ½ Σ_k |x_k|² t_kk − ¼ Σ_k (x̄_k x_{k+1} t_{k+1,k} + x̄_{k+1} x_k t_{k,k+1})
//! ```
//!
//! independently of θ, and is minimized by the rank-one seed
//! `t_kl = x̄_k x_l / (|x_k||x_l|)` with value `½(1 − Σ_k |x_k||x_{k+1}|)`.

use std::f64::consts::PI;

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tridiag::SymTridiagonal;

pub const NORM_TOL: f64 = 1e-12;
pub const HERMITIAN_TOL: f64 = 1e-12;
pub const PSD_TOL: f64 = 1e-10;

/// Normalized input amplitudes over the eigenlevels.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaseInputState {
    amplitudes: Vec<Complex64>,
}

impl PhaseInputState {
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::InvalidArgument(
                "input state needs at least one level".into(),
            ));
        }
        let norm_sq: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if (norm_sq - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized(norm_sq));
        }
        Ok(Self { amplitudes })
    }

    /// Rescales arbitrary nonzero amplitudes onto the unit sphere.
    pub fn normalized(amplitudes: Vec<Complex64>) -> Result<Self> {
        let norm = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if !(norm > 0.0 && norm.is_finite()) {
            return Err(Error::NotNormalized(norm * norm));
        }
        Self::new(amplitudes.into_iter().map(|a| a / norm).collect())
    }

    pub fn from_real(amplitudes: &[f64]) -> Result<Self> {
        Self::normalized(amplitudes.iter().map(|&a| Complex64::new(a, 0.0)).collect())
    }

    /// Uniformly random state on the complex unit sphere.
    pub fn random<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Result<Self> {
        let raw = (0..d)
            .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
            .collect();
        Self::normalized(raw)
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn magnitudes(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|a| a.norm()).collect()
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn with_global_phase(&self, alpha: f64) -> Self {
        let w = Complex64::from_polar(1.0, alpha);
        Self {
            amplitudes: self.amplitudes.iter().map(|a| a * w).collect(),
        }
    }
}

/// Hermitian, positive semidefinite, unit-diagonal seed of a covariant POVM.
#[derive(Debug, Clone, PartialEq)]
pub struct SeedMatrix {
    entries: DMatrix<Complex64>,
}

impl SeedMatrix {
    pub fn new(entries: DMatrix<Complex64>) -> Result<Self> {
        let (r, c) = entries.shape();
        if r != c {
            return Err(Error::DimensionMismatch {
                expected: r,
                got: c,
            });
        }
        if r == 0 {
            return Err(Error::InvalidArgument("empty seed matrix".into()));
        }
        let herm_dev = (&entries - entries.adjoint())
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        if herm_dev > HERMITIAN_TOL {
            return Err(Error::NotHermitian(herm_dev));
        }
        for i in 0..r {
            let v = entries[(i, i)];
            if (v.re - 1.0).abs() > HERMITIAN_TOL || v.im.abs() > HERMITIAN_TOL {
                return Err(Error::DiagonalNotUnit {
                    index: i,
                    value: v.re,
                });
            }
        }
        let min_eig = SymmetricEigen::new(entries.clone())
            .eigenvalues
            .iter()
            .cloned()
            .fold(f64::INFINITY, f64::min);
        if min_eig < -PSD_TOL {
            return Err(Error::NotPositiveSemidefinite(min_eig));
        }
        Ok(Self { entries })
    }

    pub fn identity(d: usize) -> Self {
        Self {
            entries: DMatrix::identity(d, d),
        }
    }

    pub fn all_ones(d: usize) -> Self {
        Self {
            entries: DMatrix::from_element(d, d, Complex64::new(1.0, 0.0)),
        }
    }

    /// Gram matrix of `d` random unit vectors in `C^rank`.
    pub fn random_gram<R: Rng + ?Sized>(d: usize, rank: usize, rng: &mut R) -> Self {
        let rank = rank.max(1);
        let vecs: Vec<Vec<Complex64>> = (0..d)
            .map(|_| {
                let v: Vec<Complex64> = (0..rank)
                    .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
                    .collect();
                let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
                v.into_iter().map(|z| z / n).collect()
            })
            .collect();
        let mut entries = DMatrix::from_fn(d, d, |k, l| {
            vecs[k]
                .iter()
                .zip(&vecs[l])
                .map(|(a, b)| a.conj() * b)
                .sum::<Complex64>()
        });
        for k in 0..d {
            entries[(k, k)] = Complex64::new(1.0, 0.0);
            for l in 0..k {
                entries[(k, l)] = entries[(l, k)].conj();
            }
        }
        Self { entries }
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &DMatrix<Complex64> {
        &self.entries
    }

    pub fn get(&self, k: usize, l: usize) -> Complex64 {
        self.entries[(k, l)]
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut ev: Vec<f64> = SymmetricEigen::new(self.entries.clone())
            .eigenvalues
            .iter()
            .cloned()
            .collect();
        ev.sort_by(|a, b| b.partial_cmp(a).unwrap());
        ev
    }
}

/// A complete covariant phase-estimation design.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseDesign {
    pub input: PhaseInputState,
    pub seed: SeedMatrix,
    pub error: f64,
}

impl PhaseDesign {
    pub fn new(input: PhaseInputState, seed: SeedMatrix) -> Result<Self> {
        let error = phase_error(&input, &seed)?;
        Ok(Self { input, seed, error })
    }
}

/// Mean error of the covariant POVM generated by `t` on input `x`.
pub fn phase_error(x: &PhaseInputState, t: &SeedMatrix) -> Result<f64> {
    let d = x.dim();
    if t.dim() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            got: t.dim(),
        });
    }
    let a = x.amplitudes();
    let diag: Complex64 = a
        .iter()
        .enumerate()
        .map(|(k, ak)| ak.norm_sqr() * t.get(k, k))
        .sum();
    let mut cross = Complex64::new(0.0, 0.0);
    for k in 0..d.saturating_sub(1) {
        cross +=
            a[k].conj() * a[k + 1] * t.get(k + 1, k) + a[k + 1].conj() * a[k] * t.get(k, k + 1);
    }
    Ok((0.5 * diag - 0.25 * cross).re)
}

/// Unit phases `x_k/|x_k|`, with 1 standing in for zero amplitudes.
pub(crate) fn unit_phases(x: &[Complex64]) -> Vec<Complex64> {
    x.iter()
        .map(|a| {
            let r = a.norm();
            if r > 0.0 {
                a / r
            } else {
                Complex64::new(1.0, 0.0)
            }
        })
        .collect()
}

/// Rank-one seed `t_kl = x̄_k x_l / (|x_k||x_l|)` attaining the minimum error.
pub fn optimal_seed(x: &PhaseInputState) -> SeedMatrix {
    let u = unit_phases(x.amplitudes());
    let d = u.len();
    SeedMatrix {
        entries: DMatrix::from_fn(d, d, |k, l| u[k].conj() * u[l]),
    }
}

/// `½(1 − Σ_k |x_k||x_{k+1}|)`.
pub fn min_covariant_error(x: &PhaseInputState) -> f64 {
    let m = x.magnitudes();
    let s: f64 = m.windows(2).map(|w| w[0] * w[1]).sum();
    0.5 * (1.0 - s)
}

/// Minimum error over `n + 1` levels in closed form, `½(1 − cos(π/(n+2)))`.
pub fn optimal_error_closed_form(n: usize) -> f64 {
    0.5 * (1.0 - (PI / (n as f64 + 2.0)).cos())
}

/// Exact optimal input on `n + 1` levels.
///
/// The minimum of `½(1 − Σ a_k a_{k+1})` over the nonnegative unit sphere is
/// attained by the Perron vector of the tridiagonal matrix with zero diagonal
/// and off-diagonal ½.
pub fn optimal_input(n: usize) -> PhaseDesign {
    let levels = n + 1;
    let t = SymTridiagonal::constant_coupling(levels, 0.5).expect("levels >= 1");
    let (_, v) = t.largest_eigenpair();
    let v: Vec<f64> = v.into_iter().map(|a| a.max(0.0)).collect();
    let input = PhaseInputState::from_real(&v).expect("Perron vector is nonzero");
    let seed = optimal_seed(&input);
    PhaseDesign::new(input, seed).expect("dimensions agree")
}

/// Sine-profile input `a_k = √2/√(n+1) · sin(π(k + ½)/(n + 1))`, `k = 0..=n`.
pub fn bdm_input(n: usize) -> Result<PhaseInputState> {
    if n == 0 {
        return Err(Error::InvalidArgument(
            "sine-profile input needs n >= 1".into(),
        ));
    }
    let m = n as f64 + 1.0;
    let scale = (2.0 / m).sqrt();
    let a: Vec<Complex64> = (0..=n)
        .map(|k| Complex64::new(scale * (PI * (k as f64 + 0.5) / m).sin(), 0.0))
        .collect();
    PhaseInputState::new(a)
}

/// Leading-order error `π²/(4n²)`.
pub fn asymptotic_error(n: usize) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidArgument(
            "asymptotic error needs n >= 1".into(),
        ));
    }
    Ok(PI * PI / (4.0 * (n as f64).powi(2)))
}
