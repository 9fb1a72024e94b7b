//! Bessel machinery against independent references: exact rational power
//! series, the periodic trapezoid of the integral representation, and a
//! direct RK4 integration of the classical master equation.

mod support;

use std::f64::consts::PI;

use combwalk::{
    bessel_j, bessel_j_sequence, classical_distribution, ctqw_distribution, ctqw_finite,
    ctqw_infinite, moments, scaled_bessel_i_sequence,
};
use support::{master_equation_rk4, power_series_j, trapezoid_j};

#[test]
fn miller_matches_exact_power_series() {
    let xs = [(1, 2), (1, 1), (5, 2), (5, 1), (10, 1), (35, 2), (25, 1)];
    let mut worst: f64 = 0.0;
    for &(num, den) in &xs {
        let x = num as f64 / den as f64;
        let seq = bessel_j_sequence(50, x);
        for n in 0..=50u32 {
            let exact = power_series_j(n, num, den, 140);
            worst = worst.max((seq[n as usize] - exact).abs());
            assert!(
                (seq[n as usize] - exact).abs() <= 1e-12,
                "J_{n}({x}): {} vs {exact}",
                seq[n as usize]
            );
        }
    }
    assert!(worst < 1e-12);
    assert!((bessel_j(0, 1.0) - 0.765_197_686_6).abs() < 1e-10);
}

#[test]
fn miller_matches_integral_representation_at_large_order() {
    for &x in &[30.0, 75.5, 150.0, 299.0, 300.0] {
        let seq = bessel_j_sequence(300, x);
        for n in (0..=300).step_by(7).chain([299, 300]) {
            let reference = trapezoid_j(n, x);
            assert!(
                (seq[n] - reference).abs() <= 1e-12,
                "J_{n}({x}): {} vs {reference}",
                seq[n]
            );
        }
    }
}

#[test]
fn squared_bessel_sum_rule() {
    let d = ctqw_distribution(50.0, 1.0, 90);
    assert!((d.total() - 1.0).abs() <= 1e-10, "{}", d.total());
}

#[test]
fn ballistic_second_moment() {
    for &x in &[1.0, 10.0, 50.0] {
        let d = ctqw_distribution(x, 1.0, (x as usize) + 60);
        let m2: f64 = d.iter().map(|(n, p)| (n * n) as f64 * p).sum();
        assert!((m2 - x * x / 2.0).abs() <= 1e-8, "x={x}: {m2}");
    }
    let m = moments(&ctqw_distribution(10.0, 1.0, 70)).unwrap();
    assert!((m.variance - 50.0).abs() <= 1e-4);
}

#[test]
fn twin_peaks_near_the_front() {
    let d = ctqw_distribution(50.0, 1.0, 100);
    let (peak_n, _) = d
        .iter()
        .fold((0, -1.0), |acc, (n, p)| if p > acc.1 { (n, p) } else { acc });
    assert!(peak_n.abs() >= 40, "peak at {peak_n}");
    assert_eq!(d.get(peak_n), d.get(-peak_n));
}

#[test]
fn finite_lattice_matches_infinite_when_boundaries_unreached() {
    let size = 401;
    let origin = 200;
    let s = ctqw_finite(size, origin, 10.0, 1.0).unwrap();
    let mut worst: f64 = 0.0;
    for (j, c) in s.amplitudes.iter().enumerate() {
        let n = j as i64 - origin as i64;
        let inf = ctqw_infinite(n, 10.0, 1.0);
        worst = worst.max((c.norm_sqr() - inf.norm_sqr()).abs());
        assert!((c - inf).norm() < 1e-10, "n={n}");
    }
    assert!(worst <= 1e-10);
}

#[test]
fn classical_closed_form_matches_master_equation() {
    let range = 120;
    let numeric = master_equation_rk4(1.0, 10.0, range, 4000);
    let closed = classical_distribution(10.0, 1.0, range).unwrap();
    let worst = closed
        .probabilities
        .iter()
        .zip(&numeric)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    assert!(worst <= 1e-8, "{worst}");
    let var: f64 = numeric
        .iter()
        .enumerate()
        .map(|(i, p)| (i as f64 - range as f64).powi(2) * p)
        .sum();
    assert!((var - 10.0).abs() <= 1e-8, "{var}");
    assert!((closed.total() - 1.0).abs() <= 1e-10);
    let m = moments(&closed).unwrap();
    assert!((m.variance - 10.0).abs() <= 1e-6);
}

#[test]
fn scaled_modified_bessel_large_argument() {
    // No overflow at large γt; e^{−x}I_0(x) ~ 1/sqrt(2πx).
    let s = scaled_bessel_i_sequence(10, 2000.0);
    let asym = 1.0 / (2.0 * PI * 2000.0).sqrt() * (1.0 + 1.0 / (8.0 * 2000.0));
    assert!((s[0] - asym).abs() / asym < 1e-6);
    assert!(s.iter().all(|v| v.is_finite() && *v > 0.0));
}
