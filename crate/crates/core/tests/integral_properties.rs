use covest::integrals::{
    class_integral, delta_pattern, phase_error_kernel, phase_error_kernel_complex,
    su2_error_kernel, QuadratureSpec,
};
use covest::su2::{character, IrrepLabel};

#[test]
fn kernels_are_symmetric() {
    for k in 1..=30usize {
        for l in 1..=30 {
            let s = su2_error_kernel(k, l).unwrap();
            assert!((s - su2_error_kernel(l, k).unwrap()).abs() < 1e-13);
            let p = phase_error_kernel_complex(k, l);
            let q = phase_error_kernel_complex(l, k);
            assert!((p - q.conj()).norm() < 1e-13);
            assert!((p - q).norm() < 1e-13);
        }
    }
}

#[test]
fn kernels_agree_with_each_other_and_the_delta_pattern() {
    for k in 1..=30usize {
        for l in 1..=30 {
            let s = su2_error_kernel(k, l).unwrap();
            assert!((s - phase_error_kernel(k, l)).abs() < 1e-12, "({k}, {l})");
            assert!((s - delta_pattern(k, l)).abs() < 1e-12, "({k}, {l})");
        }
    }
}

#[test]
fn interior_row_sums_vanish() {
    for k in 2..30 {
        let sum: f64 = (k - 1..=k + 1)
            .map(|l| su2_error_kernel(k, l).unwrap())
            .sum();
        assert!(sum.abs() < 1e-13, "k {k}: {sum}");
        let total: f64 = (1..=40).map(|l| su2_error_kernel(k, l).unwrap()).sum();
        assert!(total.abs() < 1e-12);
    }
}

#[test]
fn characters_are_orthonormal_under_the_class_integral() {
    let spec = QuadratureSpec::new(128).unwrap();
    for a in 1..=20 {
        for b in 1..=20 {
            let (la, lb) = (IrrepLabel::new(a).unwrap(), IrrepLabel::new(b).unwrap());
            let v = class_integral(|t| character(la, t) * character(lb, t), &spec);
            let expected = if a == b { 1.0 } else { 0.0 };
            assert!((v - expected).abs() < 1e-12, "({a}, {b}): {v}");
        }
    }
}

#[test]
fn refinement_is_stable_for_all_kernel_sizes() {
    for k in 1..=30usize {
        for l in [(k - 1).max(1), k, k + 1, k + 7] {
            let f = |t: f64| {
                let s = (0.5 * t).sin();
                s * s
                    * character(IrrepLabel::new(2 * k).unwrap(), t)
                    * character(IrrepLabel::new(2 * l).unwrap(), t)
            };
            let base = QuadratureSpec::for_degree(2 * k + 2 * l + 4);
            let fine = QuadratureSpec::new(2 * base.node_count()).unwrap();
            assert!((class_integral(f, &base) - class_integral(f, &fine)).abs() < 1e-13);
        }
    }
}
