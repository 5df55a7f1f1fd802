//! Estimation of an unknown SU(2) action from `n` parallel uses.
//!
//! `(C²)^{⊗n}` splits into irreps of dimension `2k` (odd `n = 2d − 1`,
//! `k = 1..=d`) or `2k + 1` (even `n = 2d`, `k = 0..=d`). Putting amplitude
//! `x_k` on a maximally entangled state of each block with its reference
//! and measuring with a seed-generated covariant POVM gives an error
//! functional with exactly the shape of the phase problem, because the
//! character kernel `∫ d(I,g) χ^{2k} χ^{2l} μ(dg)` equals `½δ − ¼δ_{±1}`.

use num_bigint::BigUint;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::integrals::su2_error_kernel;
use crate::phase::{
    optimal_error_closed_form, optimal_input, optimal_seed, PhaseInputState, SeedMatrix,
};
use crate::su2::multiplicity_spectrum;

const AMPLITUDE_TOL: f64 = 1e-12;
const SANDWICH_TOL: f64 = 1e-10;
const BRUTE_FORCE_MAX_BLOCKS: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Odd,
    Even,
}

impl Parity {
    pub fn of(n: usize) -> Self {
        if n % 2 == 1 {
            Parity::Odd
        } else {
            Parity::Even
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ReferenceMode {
    External,
    SelfEntangled,
}

/// Number of irrep blocks in `(C²)^{⊗n}`.
pub fn block_count(n: usize) -> usize {
    match Parity::of(n) {
        Parity::Odd => n.div_ceil(2),
        Parity::Even => n / 2 + 1,
    }
}

/// Irrep dimension of block index `i` (0-based).
pub fn block_dim(n: usize, i: usize) -> usize {
    match Parity::of(n) {
        Parity::Odd => 2 * (i + 1),
        Parity::Even => 2 * i + 1,
    }
}

/// Nonnegative unit amplitudes over the irrep blocks of `(C²)^{⊗n}`.
///
/// Complex phases on the blocks can always be moved into the seed matrix,
/// so only magnitudes are kept.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Su2BlockAmplitudes {
    n: usize,
    parity: Parity,
    amplitudes: Vec<f64>,
}

impl Su2BlockAmplitudes {
    pub fn new(n: usize, amplitudes: Vec<f64>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("n must be >= 1".into()));
        }
        let expected = block_count(n);
        if amplitudes.len() != expected {
            return Err(Error::DimensionMismatch {
                expected,
                got: amplitudes.len(),
            });
        }
        if let Some(a) = amplitudes.iter().find(|a| a.is_nan() || **a < 0.0) {
            return Err(Error::InvalidArgument(format!(
                "block amplitudes must be nonnegative, found {a}"
            )));
        }
        let norm_sq: f64 = amplitudes.iter().map(|a| a * a).sum();
        if (norm_sq - 1.0).abs() > AMPLITUDE_TOL {
            return Err(Error::NotNormalized(norm_sq));
        }
        Ok(Self {
            n,
            parity: Parity::of(n),
            amplitudes,
        })
    }

    pub fn normalized(n: usize, amplitudes: Vec<f64>) -> Result<Self> {
        let norm = amplitudes.iter().map(|a| a * a).sum::<f64>().sqrt();
        if !(norm > 0.0 && norm.is_finite()) {
            return Err(Error::NotNormalized(norm * norm));
        }
        Self::new(n, amplitudes.into_iter().map(|a| a / norm).collect())
    }

    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<Self> {
        let raw = (0..block_count(n)).map(|_| rng.random::<f64>()).collect();
        Self::normalized(n, raw)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    pub fn amplitudes(&self) -> &[f64] {
        &self.amplitudes
    }

    pub fn len(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amplitudes.is_empty()
    }

    pub fn dims(&self) -> Vec<usize> {
        (0..self.len()).map(|i| block_dim(self.n, i)).collect()
    }

    /// The same amplitudes viewed as a phase-problem input state.
    pub fn as_phase_input(&self) -> PhaseInputState {
        PhaseInputState::from_real(&self.amplitudes).expect("amplitudes are normalized")
    }

    fn require(&self, parity: Parity) -> Result<()> {
        if self.parity != parity {
            return Err(Error::ParityMismatch {
                expected: match parity {
                    Parity::Odd => "odd",
                    Parity::Even => "even",
                },
                n: self.n,
            });
        }
        Ok(())
    }
}

/// Input amplitudes, seed and resulting error of an SU(2) estimation scheme.
#[derive(Debug, Clone, PartialEq)]
pub struct Su2Design {
    pub blocks: Su2BlockAmplitudes,
    pub seed: SeedMatrix,
    pub reference_mode: ReferenceMode,
    pub error: f64,
}

impl Su2Design {
    /// Odd-`n` design with an arbitrary seed and an external reference.
    pub fn with_seed(blocks: Su2BlockAmplitudes, seed: SeedMatrix) -> Result<Self> {
        let error = su2_error_odd(&blocks, &seed)?;
        Ok(Self {
            blocks,
            seed,
            reference_mode: ReferenceMode::External,
            error,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockFeasibility {
    pub dim: usize,
    pub multiplicity: BigUint,
    /// Dimension of the reference the block's maximally entangled state needs.
    pub reference_dim: usize,
    pub feasible: bool,
}

/// Which irrep blocks can use their own permutation multiplicity space as reference.
#[derive(Debug, Clone, PartialEq)]
pub struct FeasibilityReport {
    pub n: usize,
    /// One record per block, in block order.
    pub blocks: Vec<BlockFeasibility>,
    /// Block indices of the longest contiguous run of feasible blocks.
    pub usable: Vec<usize>,
    /// Optimal error using only the usable blocks, `None` if there are none.
    pub achievable_error: Option<f64>,
}

/// `∫ d(I,g) |χ^j(g)|² μ(dg)`: ¾ for the trivial irrep, ½ otherwise.
pub fn single_irrep_error(j: crate::su2::IrrepLabel) -> f64 {
    if j.dim() == 1 {
        0.75
    } else {
        0.5
    }
}

/// Mean error of the odd-`n` design with amplitudes `blocks` and seed `t`.
pub fn su2_error_odd(blocks: &Su2BlockAmplitudes, t: &SeedMatrix) -> Result<f64> {
    blocks.require(Parity::Odd)?;
    let d = blocks.len();
    if t.dim() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            got: t.dim(),
        });
    }
    let x = blocks.amplitudes();
    let mut err: f64 = x
        .iter()
        .enumerate()
        .map(|(k, xk)| 0.5 * xk * xk * t.get(k, k).re)
        .sum();
    for k in 1..d {
        let pair = t.get(k, k - 1) + t.get(k - 1, k);
        err -= 0.25 * x[k - 1] * x[k] * pair.re;
    }
    Ok(err)
}

/// `½(1 − Σ x_k x_{k+1})`, the odd-case error with the optimal seed.
pub fn min_su2_error_odd(blocks: &Su2BlockAmplitudes) -> Result<f64> {
    blocks.require(Parity::Odd)?;
    let s: f64 = blocks.amplitudes().windows(2).map(|w| w[0] * w[1]).sum();
    Ok(0.5 * (1.0 - s))
}

/// `½(1 − Σ_{k=0}^{d−1} a_k a_{k+1}) + ¼a_0` for even `n = 2d`.
pub fn su2_error_even(blocks: &Su2BlockAmplitudes) -> Result<f64> {
    blocks.require(Parity::Even)?;
    Ok(even_objective(blocks.amplitudes()))
}

fn even_objective(a: &[f64]) -> f64 {
    let s: f64 = a.windows(2).map(|w| w[0] * w[1]).sum();
    0.5 * (1.0 - s) + 0.25 * a[0]
}

/// Seed of the optimal design for nonnegative amplitudes.
pub fn block_seed(blocks: &Su2BlockAmplitudes) -> SeedMatrix {
    optimal_seed(&blocks.as_phase_input())
}

/// Recomputes the odd-case error as `Σ_{k,l} x_k x_l t_{lk} I(k,l)` with each
/// character integral `I(k,l)` evaluated by quadrature.
pub fn brute_force_su2_error(blocks: &Su2BlockAmplitudes, t: &SeedMatrix) -> Result<f64> {
    blocks.require(Parity::Odd)?;
    let d = blocks.len();
    if d > BRUTE_FORCE_MAX_BLOCKS {
        return Err(Error::ScaleExceeded(format!(
            "{d} blocks exceeds the quadrature oracle limit of {BRUTE_FORCE_MAX_BLOCKS}"
        )));
    }
    if t.dim() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            got: t.dim(),
        });
    }
    let x = blocks.amplitudes();
    let mut total = 0.0;
    for k in 0..d {
        for l in 0..d {
            let kernel = su2_error_kernel(k + 1, l + 1)?;
            total += x[k] * x[l] * t.get(l, k).re * kernel;
        }
    }
    Ok(total)
}

/// Minimizes `½(1 − Σ a_k a_{k+1}) + ¼a_0` over the nonnegative unit sphere
/// in `R^{levels}`; returns the minimizer and its value.
///
/// Interior stationary points on a support `0..=m` solve
/// `(B − ν)a = e_0/4` with `B` the ½-coupling matrix. For `a > 0` this forces
/// `a_k ∝ sin((m + 1 − k)ω)`, `ν = cos ω`, `ω ∈ (π/(m+2), π/(m+1))`, and the
/// norm condition becomes `Σ_{j=1}^{m+1} sin²(jω) = 4 sin²((m+2)ω)`. The only
/// other candidates have `a_0 = 0`, where the problem reduces to the phase
/// problem on the remaining levels.
pub fn optimal_even_amplitudes(levels: usize) -> (Vec<f64>, f64) {
    assert!(levels >= 1, "need at least one level");
    let mut best: (Vec<f64>, f64) = {
        let mut a = vec![0.0; levels];
        a[0] = 1.0;
        let v = even_objective(&a);
        (a, v)
    };
    if levels >= 2 {
        let phase = optimal_input(levels - 2);
        let mut a = vec![0.0];
        a.extend(phase.input.magnitudes());
        let v = even_objective(&a);
        if v < best.1 {
            best = (a, v);
        }
    }
    for m in 0..levels {
        for omega in even_stationary_frequencies(m) {
            let mut a: Vec<f64> = (0..=m)
                .map(|k| ((m + 1 - k) as f64 * omega).sin().max(0.0))
                .collect();
            let norm = a.iter().map(|v| v * v).sum::<f64>().sqrt();
            a.iter_mut().for_each(|v| *v /= norm);
            a.resize(levels, 0.0);
            let v = even_objective(&a);
            if v < best.1 {
                best = (a, v);
            }
        }
    }
    best
}

fn even_stationary_frequencies(m: usize) -> Vec<f64> {
    use std::f64::consts::PI;
    let big_n = (m + 1) as f64;
    let secular = |w: f64| {
        // Σ_{j=1}^{N} sin²(jω) = N/2 − ½ Σ cos(2jω)
        let cos_sum = (big_n * w).sin() * ((big_n + 1.0) * w).cos() / w.sin();
        let s = 0.5 * big_n - 0.5 * cos_sum;
        let t = ((big_n + 1.0) * w).sin();
        s - 4.0 * t * t
    };
    let lo = PI / (m as f64 + 2.0);
    let hi = PI / (m as f64 + 1.0);
    let grid = 2048;
    let h = (hi - lo) / grid as f64;
    let mut roots = Vec::new();
    let mut prev_w = lo + 1e-3 * h;
    let mut prev_f = secular(prev_w);
    for i in 1..=grid {
        let w = if i == grid {
            hi - 1e-3 * h
        } else {
            lo + i as f64 * h
        };
        let f = secular(w);
        if prev_f == 0.0 {
            roots.push(prev_w);
        } else if prev_f.signum() != f.signum() {
            let (mut a, mut b, mut fa) = (prev_w, w, prev_f);
            for _ in 0..200 {
                let mid = 0.5 * (a + b);
                if mid <= a || mid >= b {
                    break;
                }
                let fm = secular(mid);
                if fm.signum() == fa.signum() {
                    a = mid;
                    fa = fm;
                } else {
                    b = mid;
                }
            }
            roots.push(0.5 * (a + b));
        }
        prev_w = w;
        prev_f = f;
    }
    roots
}

/// Independent route to the even-case optimum: projected power iteration on
/// the convex surrogate `aᵀ(B + I)a − a_0/2`, restarted from the `a_0 = 0`
/// phase optimum and from `random_starts` random points.
pub fn even_case_multistart<R: Rng + ?Sized>(
    levels: usize,
    random_starts: usize,
    rng: &mut R,
) -> (Vec<f64>, f64) {
    assert!(levels >= 1, "need at least one level");
    let mut starts: Vec<Vec<f64>> = Vec::with_capacity(random_starts + 1);
    if levels >= 2 {
        let mut a = vec![0.0];
        a.extend(optimal_input(levels - 2).input.magnitudes());
        starts.push(a);
    } else {
        starts.push(vec![1.0]);
    }
    for _ in 0..random_starts {
        starts.push((0..levels).map(|_| rng.random::<f64>() + 1e-3).collect());
    }

    let mut best: Option<(Vec<f64>, f64)> = None;
    for mut a in starts {
        let norm = a.iter().map(|v| v * v).sum::<f64>().sqrt();
        a.iter_mut().for_each(|v| *v /= norm);
        let mut f = even_objective(&a);
        for _ in 0..2_000_000 {
            let mut next: Vec<f64> = (0..levels)
                .map(|k| {
                    let mut g = 2.0 * a[k];
                    if k > 0 {
                        g += a[k - 1];
                    }
                    if k + 1 < levels {
                        g += a[k + 1];
                    }
                    if k == 0 {
                        g -= 0.5;
                    }
                    g.max(0.0)
                })
                .collect();
            let norm = next.iter().map(|v| v * v).sum::<f64>().sqrt();
            next.iter_mut().for_each(|v| *v /= norm);
            let f_next = even_objective(&next);
            let step: f64 = next
                .iter()
                .zip(&a)
                .map(|(p, q)| (p - q).abs())
                .fold(0.0, f64::max);
            a = next;
            let done = (f - f_next).abs() < 1e-16 && step < 1e-11;
            f = f_next;
            if done {
                break;
            }
        }
        if best.as_ref().is_none_or(|(_, v)| f < *v) {
            best = Some((a, f));
        }
    }
    best.expect("at least one start")
}

/// Reference-dimension feasibility of every block and the resulting error.
pub fn self_entanglement_feasible(n: usize) -> Result<FeasibilityReport> {
    let spectrum = multiplicity_spectrum(n)?;
    let blocks: Vec<BlockFeasibility> = (0..block_count(n))
        .map(|i| {
            let dim = block_dim(n, i);
            let multiplicity = spectrum
                .multiplicity_of(dim)
                .cloned()
                .expect("every block dimension occurs in the spectrum");
            let feasible = multiplicity >= BigUint::from(dim);
            BlockFeasibility {
                dim,
                multiplicity,
                reference_dim: dim,
                feasible,
            }
        })
        .collect();

    let mut usable: Vec<usize> = Vec::new();
    let mut run: Vec<usize> = Vec::new();
    for (i, b) in blocks.iter().enumerate() {
        if b.feasible {
            run.push(i);
            if run.len() > usable.len() {
                usable = run.clone();
            }
        } else {
            run.clear();
        }
    }

    let achievable_error = if usable.is_empty() {
        None
    } else {
        Some(restricted_optimum(n, &usable).1)
    };
    Ok(FeasibilityReport {
        n,
        blocks,
        usable,
        achievable_error,
    })
}

/// Optimal amplitudes supported on the contiguous block run `usable`.
fn restricted_optimum(n: usize, usable: &[usize]) -> (Vec<f64>, f64) {
    let total = block_count(n);
    let mut a = vec![0.0; total];
    let first = usable[0];
    let len = usable.len();
    let even_with_trivial = Parity::of(n) == Parity::Even && first == 0;
    let (profile, _) = if even_with_trivial {
        optimal_even_amplitudes(len)
    } else {
        let p = optimal_input(len - 1);
        (p.input.magnitudes(), p.error)
    };
    a[first..first + len].copy_from_slice(&profile);
    let value = if Parity::of(n) == Parity::Even {
        even_objective(&a)
    } else {
        let s: f64 = a.windows(2).map(|w| w[0] * w[1]).sum();
        0.5 * (1.0 - s)
    };
    (a, value)
}

/// Optimal design for `n` uses with the given reference resources.
pub fn design_optimal(n: usize, mode: ReferenceMode) -> Result<Su2Design> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be >= 1".into()));
    }
    let parity = Parity::of(n);
    let amplitudes = match mode {
        ReferenceMode::External => match parity {
            Parity::Odd => {
                let d = block_count(n);
                optimal_input(d - 1).input.magnitudes()
            }
            Parity::Even => {
                let d = n / 2;
                let (a, value) = optimal_even_amplitudes(d + 1);
                let lower = optimal_error_closed_form(d);
                let upper = optimal_error_closed_form(d - 1);
                if value < lower - SANDWICH_TOL || value > upper + SANDWICH_TOL {
                    return Err(Error::InvalidArgument(format!(
                        "even-case optimum {value} outside [{lower}, {upper}]"
                    )));
                }
                a
            }
        },
        ReferenceMode::SelfEntangled => {
            let report = self_entanglement_feasible(n)?;
            if report.usable.is_empty() {
                return Err(Error::EmptyUsableBlocks(n));
            }
            let (a, value) = restricted_optimum(n, &report.usable);
            if parity == Parity::Odd {
                let expected = optimal_error_closed_form(report.usable.len() - 1);
                debug_assert!((value - expected).abs() < 1e-10, "{value} vs {expected}");
            }
            a
        }
    };
    let blocks = Su2BlockAmplitudes::normalized(n, amplitudes)?;
    let seed = block_seed(&blocks);
    let error = match parity {
        Parity::Odd => su2_error_odd(&blocks, &seed)?,
        Parity::Even => su2_error_even(&blocks)?,
    };
    Ok(Su2Design {
        blocks,
        seed,
        reference_mode: mode,
        error,
    })
}
