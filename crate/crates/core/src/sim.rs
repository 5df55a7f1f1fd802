//! Monte Carlo simulation of the covariant protocols.
//!
//! By covariance the error law does not depend on the true parameter, so
//! the truth is fixed at the identity and only the relative angle between
//! truth and estimate is sampled. Outcomes are drawn by inverse CDF on a
//! gridded density and the empirical mean of `sin²(angle/2)` is compared
//! against the closed form.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::phase::PhaseDesign;
use crate::su2::{character_dim, TWO_PI};
use crate::su2_estimation::{block_dim, Parity, Su2Design};

pub const DEFAULT_GRID_SIZE: usize = 4096;
pub const DENSITY_TOL: f64 = 1e-10;
pub const DEFAULT_WORKERS: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Protocol {
    Phase,
    Su2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimConfig {
    pub protocol: Protocol,
    pub n: usize,
    pub trials: usize,
    pub seed: u64,
    pub grid_size: usize,
    /// Number of independent rng streams; results depend on it but not on
    /// how many threads execute them.
    pub workers: usize,
}

impl SimConfig {
    pub fn new(protocol: Protocol, n: usize, trials: usize, seed: u64) -> Result<Self> {
        Self {
            protocol,
            n,
            trials,
            seed,
            grid_size: DEFAULT_GRID_SIZE,
            workers: DEFAULT_WORKERS,
        }
        .validated()
    }

    pub fn with_grid_size(mut self, grid_size: usize) -> Result<Self> {
        self.grid_size = grid_size;
        self.validated()
    }

    pub fn with_workers(mut self, workers: usize) -> Result<Self> {
        self.workers = workers;
        self.validated()
    }

    fn validated(self) -> Result<Self> {
        if self.trials == 0 {
            return Err(Error::InvalidArgument("trials must be >= 1".into()));
        }
        if self.grid_size < 256 || !self.grid_size.is_power_of_two() {
            return Err(Error::InvalidArgument(format!(
                "grid size must be a power of two >= 256, got {}",
                self.grid_size
            )));
        }
        if self.workers == 0 {
            return Err(Error::InvalidArgument("workers must be >= 1".into()));
        }
        Ok(self)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimResult {
    pub trials: usize,
    pub empirical_mean_error: f64,
    pub standard_error: f64,
    pub closed_form: f64,
    pub z_score: f64,
}

/// A probability density for a relative angle on `[0, 2π]`.
pub trait AngleDensity: Sync {
    fn eval(&self, angle: f64) -> f64;
}

/// Density of `φ = θ − θ̂` relative to `dφ`:
/// `(1/2π) Σ_{k,l} x̄_k x_l t_{lk} e^{i(k−l)φ}`.
///
/// With the optimal rank-one seed this is `(1/2π)|Σ_k |x_k| e^{ikφ}|²`.
#[derive(Debug, Clone)]
pub struct PhaseOutcomeDensity {
    /// `F_m` for `m = 0..d`; `F_{−m} = conj(F_m)`.
    fourier: Vec<Complex64>,
}

pub fn outcome_density_phase(design: &PhaseDesign) -> PhaseOutcomeDensity {
    let x = design.input.amplitudes();
    let d = x.len();
    let mut fourier = vec![Complex64::new(0.0, 0.0); d];
    for k in 0..d {
        for l in 0..=k {
            fourier[k - l] += x[k].conj() * x[l] * design.seed.get(l, k);
        }
    }
    PhaseOutcomeDensity { fourier }
}

impl AngleDensity for PhaseOutcomeDensity {
    fn eval(&self, phi: f64) -> f64 {
        let mut s = self.fourier[0].re;
        for (m, f) in self.fourier.iter().enumerate().skip(1) {
            s += 2.0 * (f * Complex64::from_polar(1.0, m as f64 * phi)).re;
        }
        s / TWO_PI
    }
}

/// Density of the class angle of `ĝ` (truth at identity) relative to `dθ`:
/// `(1/π) sin²(θ/2) Σ_{k,l} x_k x_l t_{lk} χ^{2k}(θ) χ^{2l}(θ)`.
#[derive(Debug, Clone)]
pub struct Su2ClassDensity {
    amplitudes: Vec<f64>,
    dims: Vec<usize>,
    /// `Re t_{lk}`, row-major over `(k, l)`.
    seed_re: Vec<f64>,
}

pub fn outcome_density_su2_class(design: &Su2Design) -> Result<Su2ClassDensity> {
    let blocks = &design.blocks;
    if blocks.parity() != Parity::Odd {
        return Err(Error::ParityMismatch {
            expected: "odd",
            n: blocks.n(),
        });
    }
    let d = blocks.len();
    let seed_re = (0..d * d)
        .map(|i| design.seed.get(i % d, i / d).re)
        .collect();
    Ok(Su2ClassDensity {
        amplitudes: blocks.amplitudes().to_vec(),
        dims: (0..d).map(|i| block_dim(blocks.n(), i)).collect(),
        seed_re,
    })
}

impl AngleDensity for Su2ClassDensity {
    fn eval(&self, theta: f64) -> f64 {
        let d = self.amplitudes.len();
        let z: Vec<f64> = self
            .amplitudes
            .iter()
            .zip(&self.dims)
            .map(|(a, &j)| a * character_dim(j, theta))
            .collect();
        let mut q = 0.0;
        for k in 0..d {
            for l in 0..d {
                q += z[k] * z[l] * self.seed_re[k * d + l];
            }
        }
        let s = (0.5 * theta).sin();
        q * s * s / PI
    }
}

/// Inverse-CDF sampler over `[0, 2π]` from a density tabulated on a grid.
#[derive(Debug, Clone)]
pub struct GridSampler {
    step: f64,
    cdf: Vec<f64>,
}

impl GridSampler {
    pub fn new<D: AngleDensity + ?Sized>(density: &D, grid_size: usize) -> Result<Self> {
        let step = TWO_PI / grid_size as f64;
        let mut values = Vec::with_capacity(grid_size + 1);
        for i in 0..=grid_size {
            let angle = i as f64 * step;
            let v = density.eval(angle);
            if v < -DENSITY_TOL || !v.is_finite() {
                return Err(Error::NegativeDensity { angle, value: v });
            }
            values.push(v.max(0.0));
        }
        let mut cdf = Vec::with_capacity(grid_size + 1);
        cdf.push(0.0);
        let mut acc = 0.0;
        for w in values.windows(2) {
            acc += 0.5 * (w[0] + w[1]) * step;
            cdf.push(acc);
        }
        if acc.is_nan() || acc <= 0.0 {
            return Err(Error::InvalidArgument("density integrates to zero".into()));
        }
        cdf.iter_mut().for_each(|c| *c /= acc);
        Ok(Self { step, cdf })
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let u: f64 = rng.random();
        // first index with cdf > u, then interpolate inside bin i-1..i
        let i = self
            .cdf
            .partition_point(|&c| c <= u)
            .clamp(1, self.cdf.len() - 1);
        let (c0, c1) = (self.cdf[i - 1], self.cdf[i]);
        let frac = if c1 > c0 { (u - c0) / (c1 - c0) } else { 0.5 };
        ((i - 1) as f64 + frac) * self.step
    }
}

/// Streaming mean and sum of squared deviations.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct RunningStats {
    pub count: usize,
    pub mean: f64,
    pub m2: f64,
}

impl RunningStats {
    pub fn push(&mut self, x: f64) {
        self.count += 1;
        let delta = x - self.mean;
        self.mean += delta / self.count as f64;
        self.m2 += delta * (x - self.mean);
    }

    pub fn merge(&self, other: &RunningStats) -> RunningStats {
        if self.count == 0 {
            return *other;
        }
        if other.count == 0 {
            return *self;
        }
        let count = self.count + other.count;
        let delta = other.mean - self.mean;
        let mean = self.mean + delta * other.count as f64 / count as f64;
        let m2 = self.m2
            + other.m2
            + delta * delta * (self.count as f64 * other.count as f64) / count as f64;
        RunningStats { count, mean, m2 }
    }

    pub fn sample_variance(&self) -> f64 {
        self.m2 / (self.count as f64 - 1.0)
    }
}

/// A design to simulate, tagged by protocol.
#[derive(Debug, Clone)]
pub enum SimDesign {
    Phase(PhaseDesign),
    Su2(Su2Design),
}

impl SimDesign {
    fn protocol(&self) -> Protocol {
        match self {
            SimDesign::Phase(_) => Protocol::Phase,
            SimDesign::Su2(_) => Protocol::Su2,
        }
    }

    pub fn closed_form(&self) -> f64 {
        match self {
            SimDesign::Phase(d) => d.error,
            SimDesign::Su2(d) => d.error,
        }
    }
}

/// Runs `config.trials` independent estimation rounds of `design`.
pub fn simulate(config: &SimConfig, design: &SimDesign) -> Result<SimResult> {
    if config.trials < 2 {
        return Err(Error::InvalidArgument(
            "at least two trials are needed for a standard error".into(),
        ));
    }
    if design.protocol() != config.protocol {
        return Err(Error::InvalidArgument(
            "design does not match the configured protocol".into(),
        ));
    }
    let sampler = match design {
        SimDesign::Phase(d) => {
            if d.input.dim() != config.n + 1 {
                return Err(Error::DimensionMismatch {
                    expected: config.n + 1,
                    got: d.input.dim(),
                });
            }
            GridSampler::new(&outcome_density_phase(d), config.grid_size)?
        }
        SimDesign::Su2(d) => {
            if d.blocks.n() != config.n {
                return Err(Error::DimensionMismatch {
                    expected: config.n,
                    got: d.blocks.n(),
                });
            }
            GridSampler::new(&outcome_density_su2_class(d)?, config.grid_size)?
        }
    };

    let workers = config.workers.min(config.trials);
    let base = config.trials / workers;
    let extra = config.trials % workers;
    let partials: Vec<RunningStats> = (0..workers)
        .into_par_iter()
        .map(|w| {
            let count = base + usize::from(w < extra);
            let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
            rng.set_stream(w as u64);
            let mut stats = RunningStats::default();
            for _ in 0..count {
                let angle = sampler.sample(&mut rng);
                let s = (0.5 * angle).sin();
                stats.push(s * s);
            }
            stats
        })
        .collect();
    let stats = partials
        .iter()
        .fold(RunningStats::default(), |acc, s| acc.merge(s));

    let closed_form = design.closed_form();
    let standard_error = (stats.sample_variance() / stats.count as f64).sqrt();
    let diff = stats.mean - closed_form;
    let z_score = if standard_error > 0.0 {
        diff / standard_error
    } else if diff == 0.0 {
        0.0
    } else {
        diff.signum() * f64::INFINITY
    };
    Ok(SimResult {
        trials: stats.count,
        empirical_mean_error: stats.mean,
        standard_error,
        closed_form,
        z_score,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::integrals::QuadratureSpec;
    use crate::phase::{optimal_input, PhaseInputState, SeedMatrix};
    use crate::su2_estimation::{design_optimal, ReferenceMode};

    fn integrate<D: AngleDensity>(d: &D, f: impl Fn(f64) -> f64) -> f64 {
        let spec = QuadratureSpec::new(512).unwrap();
        let h = TWO_PI / spec.node_count() as f64;
        spec.nodes().map(|t| d.eval(t) * f(t)).sum::<f64>() * h
    }

    #[test]
    fn single_level_phase_density_is_uniform() {
        let design = optimal_input(0);
        let p = outcome_density_phase(&design);
        for t in [0.0, 1.0, 4.0] {
            assert!((p.eval(t) - 1.0 / TWO_PI).abs() < 1e-15);
        }
    }

    #[test]
    fn two_level_phase_density() {
        let x = PhaseInputState::from_real(&[1.0, 1.0]).unwrap();
        let design = PhaseDesign::new(x, SeedMatrix::all_ones(2)).unwrap();
        let p = outcome_density_phase(&design);
        for t in [0.0, 0.3, 2.0, 5.5] {
            assert!((p.eval(t) - (1.0 + t.cos()) / TWO_PI).abs() < 1e-15);
        }
    }

    #[test]
    fn single_block_su2_density() {
        let design = design_optimal(1, ReferenceMode::External).unwrap();
        let q = outcome_density_su2_class(&design).unwrap();
        for t in [0.1f64, 1.0, 3.0, 6.0] {
            let s = (0.5 * t).sin();
            let c = (0.5 * t).cos();
            assert!((q.eval(t) - 4.0 / PI * s * s * c * c).abs() < 1e-14);
        }
        assert!((integrate(&q, |_| 1.0) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn even_su2_density_is_rejected() {
        let design = design_optimal(4, ReferenceMode::External).unwrap();
        assert!(matches!(
            outcome_density_su2_class(&design),
            Err(Error::ParityMismatch { .. })
        ));
    }

    #[test]
    fn sampler_rejects_negative_density() {
        struct Bad;
        impl AngleDensity for Bad {
            fn eval(&self, a: f64) -> f64 {
                a.cos()
            }
        }
        assert!(matches!(
            GridSampler::new(&Bad, 256),
            Err(Error::NegativeDensity { .. })
        ));
    }

    #[test]
    fn config_validation() {
        assert!(SimConfig::new(Protocol::Phase, 1, 0, 1).is_err());
        let c = SimConfig::new(Protocol::Phase, 1, 10, 1).unwrap();
        assert!(c.with_grid_size(300).is_err());
        assert!(c.with_grid_size(128).is_err());
        assert!(c.with_workers(0).is_err());
    }

    #[test]
    fn single_trial_is_rejected() {
        let cfg = SimConfig::new(Protocol::Phase, 1, 1, 1).unwrap();
        assert!(simulate(&cfg, &SimDesign::Phase(optimal_input(1))).is_err());
    }

    #[test]
    fn mismatched_design_is_rejected() {
        let cfg = SimConfig::new(Protocol::Su2, 3, 100, 1).unwrap();
        assert!(simulate(&cfg, &SimDesign::Phase(optimal_input(3))).is_err());
        let cfg = SimConfig::new(Protocol::Phase, 2, 100, 1).unwrap();
        assert!(simulate(&cfg, &SimDesign::Phase(optimal_input(3))).is_err());
    }

    #[test]
    fn running_stats_merge_matches_single_pass() {
        let xs: Vec<f64> = (0..1000).map(|i| ((i * 37) % 101) as f64 / 7.0).collect();
        let mut all = RunningStats::default();
        xs.iter().for_each(|&x| all.push(x));
        let (mut a, mut b) = (RunningStats::default(), RunningStats::default());
        xs[..313].iter().for_each(|&x| a.push(x));
        xs[313..].iter().for_each(|&x| b.push(x));
        let merged = a.merge(&b);
        assert_eq!(merged.count, all.count);
        assert!((merged.mean - all.mean).abs() < 1e-12);
        assert!((merged.m2 - all.m2).abs() < 1e-8 * all.m2);
    }
}
