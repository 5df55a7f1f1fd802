mod common;

use covest::phase::SeedMatrix;
use covest::sim::{simulate, Protocol, SimConfig, SimDesign};
use covest::su2::{haar_sample, GroupElement};
use covest::su2_estimation::{design_optimal, ReferenceMode, Su2BlockAmplitudes, Su2Design};
use nalgebra::DMatrix;
use num_complex::Complex64;

#[test]
fn covariant_povm_resolves_the_identity() {
    let design = common::binary_icosahedral();
    let avg = common::n3_povm_average(&design);
    let eye = DMatrix::<Complex64>::identity(common::N3_SPACE, common::N3_SPACE);
    assert!((avg - eye).map(|c| c.norm()).max() < 1e-12);
}

#[test]
fn outcome_density_is_normalized_for_any_truth() {
    let design = common::binary_icosahedral();
    let mut r = common::rng(5);
    let x = [0.6, 0.8];
    for _ in 0..5 {
        let g = haar_sample(&mut r);
        let total: f64 = design
            .iter()
            .map(|h| common::n3_density(&x, &g, h))
            .sum::<f64>()
            / 120.0;
        assert!((total - 1.0).abs() < 1e-12);
    }
}

#[test]
fn density_depends_only_on_the_relative_element() {
    let mut r = common::rng(17);
    let x = [0.3, 0.91f64.sqrt()];
    for _ in 0..50 {
        let (g, h, k) = (
            haar_sample(&mut r),
            haar_sample(&mut r),
            haar_sample(&mut r),
        );
        let base = common::n3_density(&x, &g, &h);
        let shifted = common::n3_density(&x, &k.compose(&g), &k.compose(&h));
        let relative = common::n3_density(&x, &GroupElement::identity(), &g.inverse().compose(&h));
        assert!((base - shifted).abs() < 1e-10);
        assert!((base - relative).abs() < 1e-10);
    }
}

#[test]
fn full_sampler_agrees_with_the_class_angle_sampler() {
    let design = design_optimal(3, ReferenceMode::External).unwrap();
    let a = design.blocks.amplitudes();
    let x = [a[0], a[1]];
    let full = common::n3_rejection_run(&x, 100_000, 31);
    let cfg = SimConfig::new(Protocol::Su2, 3, 100_000, 32).unwrap();
    let reduced = simulate(&cfg, &SimDesign::Su2(design.clone())).unwrap();
    let se_full = common::standard_error(&full);
    let combined = (se_full.powi(2) + reduced.standard_error.powi(2)).sqrt();
    assert!((full.mean - reduced.empirical_mean_error).abs() < 3.0 * combined);
    assert!((full.mean - design.error).abs() < 3.0 * se_full);
}

#[test]
fn importance_estimate_matches_a_suboptimal_design() {
    let x = [0.8, 0.6];
    let blocks = Su2BlockAmplitudes::new(3, x.to_vec()).unwrap();
    let design = Su2Design::with_seed(blocks, SeedMatrix::all_ones(2)).unwrap();
    let stats = common::n3_importance_run(&x, 100_000, 77);
    let se = common::standard_error(&stats);
    assert!(
        (stats.mean - design.error).abs() < 3.0 * se,
        "{} vs {}",
        stats.mean,
        design.error
    );
}
