//! Evaluators, interpolation and trace oracles checked against brute force.

mod common;

use common::*;
use quadtrace_core::chebyshev::{eval_scalar, interpolate};
use quadtrace_core::quadform::{
    one_sided_chebyshev, one_sided_standard, two_sided_chebyshev, two_sided_standard,
};
use quadtrace_core::{
    exact_trace_f, random_symmetric, scale_operator, DenseSymmetric, Interval,
    PolynomialCoefficients, ProbeSequence, SpectralInterval, SymmetricOperator,
};

#[test]
fn one_sided_standard_matches_dense_powers() {
    let a = random_symmetric(20, 1);
    let z = vec![1.0; 20];
    let c = PolynomialCoefficients::standard(vec![1.0; 4]).unwrap();
    let got = one_sided_standard(&a, &z, &c, false).unwrap();
    let want = sum(&standard_terms(&a, &z, c.coeffs()));
    assert!(rel(got.value, want) <= 1e-12, "{} vs {want}", got.value);
    assert_eq!(got.matvecs, 3);
}

#[test]
fn two_sided_standard_matches_one_sided_at_degree_20() {
    let a = random_symmetric(100, 2);
    let z = ProbeSequence::new(2, 100).rademacher(0);
    let c = PolynomialCoefficients::standard(vec![1.0; 21]).unwrap();
    let one = one_sided_standard(&a, &z, &c, false).unwrap();
    let two = two_sided_standard(&a, &z, &c, false).unwrap();
    assert!(
        rel(one.value, two.value) <= 1e-12,
        "{} vs {}",
        one.value,
        two.value
    );
    assert_eq!((one.matvecs, two.matvecs), (20, 10));
}

#[test]
fn one_sided_chebyshev_matches_dense_recurrence() {
    let a = scaled_random(50, 3);
    let z = ProbeSequence::new(3, 50).rademacher(0);
    let c = interpolate(f64::exp, 8, Interval::CANONICAL).unwrap();
    let got = one_sided_chebyshev(&a, &z, &c, false).unwrap();
    let want = sum(&chebyshev_terms(&a, &z, c.coeffs()));
    assert!(rel(got.value, want) <= 1e-12, "{} vs {want}", got.value);
}

#[test]
fn two_sided_chebyshev_matches_one_sided_at_degree_20() {
    let a = scaled_random(100, 4);
    let z = ProbeSequence::new(4, 100).rademacher(0);
    let c = interpolate(|x| (10.0 * x).exp(), 20, Interval::CANONICAL).unwrap();
    let one = one_sided_chebyshev(&a, &z, &c, false).unwrap();
    let two = two_sided_chebyshev(&a, &z, &c, false).unwrap();
    assert!(
        rel(one.value, two.value) <= 1e-12,
        "{} vs {}",
        one.value,
        two.value
    );
    assert_eq!((one.matvecs, two.matvecs), (20, 10));
}

#[test]
fn two_sided_terms_match_dense_terms() {
    let a = scaled_random(40, 11);
    let z = ProbeSequence::new(11, 40).rademacher(2);
    let c = interpolate(|x| (3.0 * x).exp(), 9, Interval::CANONICAL).unwrap();
    let want = chebyshev_terms(&a, &z, c.coeffs());
    let got = two_sided_chebyshev(&a, &z, &c, true)
        .unwrap()
        .terms
        .unwrap();
    let largest = want.iter().fold(0.0f64, |m, t| m.max(t.abs()));
    for (g, w) in got.iter().zip(&want) {
        assert!((g - w).abs() <= 1e-12 * largest, "{g} vs {w}");
    }
}

#[test]
fn chebyshev_t5_matches_recurrence() {
    let c = PolynomialCoefficients::chebyshev(vec![0.0, 0.0, 0.0, 0.0, 0.0, 1.0]).unwrap();
    let want = t_recurrence(5, 0.3);
    assert!((eval_scalar(&c, 0.3) - want).abs() <= 1e-14);
}

#[test]
fn exp10_interpolant_matches_collocation_solve() {
    let f = |x: f64| (10.0 * x).exp();
    let p = interpolate(f, 20, Interval::CANONICAL).unwrap();
    let q = linear_system_interpolant(f, 20);
    let mut worst: f64 = 0.0;
    let mut scale: f64 = 0.0;
    for k in 0..1000 {
        let x = -1.0 + 2.0 * k as f64 / 999.0;
        let qx = chebyshev_series_trig(&q, x);
        worst = worst.max((p.eval(x) - qx).abs());
        scale = scale.max(qx.abs());
    }
    assert!(worst <= 1e-10 * scale, "sup diff {worst}, sup {scale}");
}

#[test]
fn exact_trace_matches_matrix_exponential() {
    let a = scaled_random(200, 5);
    let got = exact_trace_f(&a, |x| (10.0 * x).exp()).unwrap();
    let m = a.to_nalgebra() * 10.0;
    let want = m.exp().trace();
    assert!(rel(got, want) <= 1e-8, "{got} vs {want}");
}

#[test]
fn exact_scaling_hits_plus_minus_one() {
    let a = random_symmetric(100, 8);
    let iv = SpectralInterval::exact(&a).unwrap();
    let scaled = DenseSymmetric::from_operator(&scale_operator(&a, iv));
    let ev = scaled.eigenvalues().unwrap();
    assert!((ev[0] + 1.0).abs() <= 1e-10, "{}", ev[0]);
    assert!((ev[99] - 1.0).abs() <= 1e-10, "{}", ev[99]);
}

#[test]
fn scaled_eigenvalues_are_affine_image() {
    let a = random_symmetric(60, 21);
    let ev = a.eigenvalues().unwrap();
    let iv = SpectralInterval::with_margin(ev[0], ev[59], 0.05, true).unwrap();
    let scaled = DenseSymmetric::from_operator(&scale_operator(&a, iv));
    for (s, l) in scaled.eigenvalues().unwrap().iter().zip(&ev) {
        assert!((s - iv.map(*l)).abs() <= 1e-12, "{s} vs {}", iv.map(*l));
    }
}

#[test]
fn general_matrix_market_file_matches_dense_product() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g.mtx");
    // Symmetric content declared `general`.
    let entries = [[4.0, -1.0, 0.5], [-1.0, 3.0, 2.0], [0.5, 2.0, -6.0]];
    let mut text = String::from("%%MatrixMarket matrix coordinate real general\n3 3 9\n");
    for (i, row) in entries.iter().enumerate() {
        for (j, x) in row.iter().enumerate() {
            text.push_str(&format!("{} {} {x}\n", i + 1, j + 1));
        }
    }
    std::fs::write(&path, text).unwrap();
    let m = quadtrace_core::load_matrix_market(&path).unwrap();
    let v = [0.3, -1.7, 2.2];
    let got = m.matvec(&v).unwrap();
    for (i, row) in entries.iter().enumerate() {
        let want: f64 = row.iter().zip(&v).map(|(a, b)| a * b).sum();
        assert!((got[i] - want).abs() <= 1e-15 * want.abs().max(1.0));
    }
}

#[test]
fn missing_matrix_market_file_is_io_error() {
    let err = quadtrace_core::load_matrix_market("/nonexistent/x.mtx").unwrap_err();
    assert!(matches!(err, quadtrace_core::Error::Io { .. }));
}

#[test]
fn power_iteration_interval_contains_spectrum() {
    use quadtrace_core::{estimate_interval, PowerIteration};
    let a = random_symmetric(300, 6);
    let cfg = PowerIteration {
        iters: 500,
        tol: 1e-8,
        seed: 6,
        margin: 0.01,
    };
    let iv = estimate_interval(&a, &cfg).unwrap();
    let ev = a.eigenvalues().unwrap();
    let (lmin, lmax) = (ev[0], ev[299]);
    assert!(iv.lo <= lmin && lmax <= iv.hi, "{iv:?} vs [{lmin}, {lmax}]");
    assert!(iv.hi <= lmax * 1.011, "{} vs {}", iv.hi, lmax);
}
