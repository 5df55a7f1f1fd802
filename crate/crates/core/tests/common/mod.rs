#![allow(dead_code)]

use std::collections::HashSet;

use covest::sim::RunningStats;
use covest::su2::{distance, haar_sample, irrep_matrix, GroupElement, IrrepLabel};
use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// The 120-element binary icosahedral group, a spherical 11-design on S³.
pub fn binary_icosahedral() -> Vec<GroupElement> {
    let phi = 0.5 * (1.0 + 5f64.sqrt());
    let gens = [
        GroupElement::from_quaternion([0.5, 0.5, 0.5, 0.5]).unwrap(),
        GroupElement::from_quaternion([0.5 * phi, 0.5, 0.5 / phi, 0.0]).unwrap(),
    ];
    let key = |g: &GroupElement| g.quaternion().map(|c| (c * 1e8).round() as i64);
    let mut seen: HashSet<[i64; 4]> = HashSet::new();
    let mut out = vec![GroupElement::identity()];
    seen.insert(key(&out[0]));
    let mut i = 0;
    while i < out.len() {
        for s in &gens {
            let h = out[i].compose(s);
            if seen.insert(key(&h)) {
                out.push(h);
            }
        }
        i += 1;
        assert!(
            out.len() <= 120,
            "generators do not close on a finite group"
        );
    }
    out
}

/// Block dimensions of three qubits: `V² ⊕ V⁴`.
pub const N3_DIMS: [usize; 2] = [2, 4];
pub const N3_SPACE: usize = 2 * 2 + 4 * 4;

/// `⊕_k x_k (V^{m_k}(g) ⊗ I)|Φ_k⟩` with `|Φ_k⟩` maximally entangled and normalized.
pub fn n3_state(x: &[f64; 2], g: &GroupElement) -> Vec<Complex64> {
    embed(g, |k, m| x[k] / (m as f64).sqrt())
}

/// Vector generating the rank-one covariant POVM with all-ones seed:
/// `M(ĝ) = |η(ĝ)⟩⟨η(ĝ)|`, `η(ĝ) = ⊕_k m_k (V^{m_k}(ĝ) ⊗ I)|Φ_k⟩`.
pub fn n3_povm_vector(g_hat: &GroupElement) -> Vec<Complex64> {
    embed(g_hat, |_, m| (m as f64).sqrt())
}

fn embed(g: &GroupElement, scale: impl Fn(usize, usize) -> f64) -> Vec<Complex64> {
    let mut v = Vec::with_capacity(N3_SPACE);
    for (k, &m) in N3_DIMS.iter().enumerate() {
        let vm = irrep_matrix(IrrepLabel::new(m).unwrap(), g);
        let c = scale(k, m);
        // (V ⊗ I) Σ_r |r⟩|r⟩ = Σ_{i,r} V_{ir} |i⟩|r⟩
        for i in 0..m {
            for r in 0..m {
                v.push(vm[(i, r)] * c);
            }
        }
    }
    v
}

/// Outcome density of `ĝ` against Haar measure when the truth is `g`.
pub fn n3_density(x: &[f64; 2], g: &GroupElement, g_hat: &GroupElement) -> f64 {
    let psi = n3_state(x, g);
    let eta = n3_povm_vector(g_hat);
    eta.iter()
        .zip(&psi)
        .map(|(e, p)| e.conj() * p)
        .sum::<Complex64>()
        .norm_sqr()
}

/// Draws `samples` estimates by rejection against Haar, with a Haar-random truth per draw.
pub fn n3_rejection_run(x: &[f64; 2], samples: usize, seed: u64) -> RunningStats {
    let bound = (x[0] * 2.0 + x[1] * 4.0).powi(2);
    let mut r = rng(seed);
    let mut stats = RunningStats::default();
    while stats.count < samples {
        let g = haar_sample(&mut r);
        let g_hat = haar_sample(&mut r);
        let p = n3_density(x, &g, &g_hat);
        assert!(p <= bound * (1.0 + 1e-12));
        if r.random::<f64>() * bound < p {
            stats.push(distance(&g, &g_hat));
        }
    }
    stats
}

/// Haar importance estimate of `E[d(g, ĝ)] = ∫ p(ĝ|g) d(g, ĝ) dĝ`.
pub fn n3_importance_run(x: &[f64; 2], samples: usize, seed: u64) -> RunningStats {
    let mut r = rng(seed);
    let mut stats = RunningStats::default();
    for _ in 0..samples {
        let g = haar_sample(&mut r);
        let g_hat = haar_sample(&mut r);
        stats.push(n3_density(x, &g, &g_hat) * distance(&g, &g_hat));
    }
    stats
}

pub fn standard_error(s: &RunningStats) -> f64 {
    (s.sample_variance() / s.count as f64).sqrt()
}

/// Average of `|η(ĝ)⟩⟨η(ĝ)|` over the design, equal to the Haar integral.
pub fn n3_povm_average(design: &[GroupElement]) -> DMatrix<Complex64> {
    let mut acc = DMatrix::<Complex64>::zeros(N3_SPACE, N3_SPACE);
    for g in design {
        let eta = nalgebra::DVector::from_vec(n3_povm_vector(g));
        acc += &eta * eta.adjoint();
    }
    acc / Complex64::new(design.len() as f64, 0.0)
}
