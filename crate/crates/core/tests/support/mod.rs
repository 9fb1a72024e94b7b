//! Independent reference computations shared by the test suites. Nothing
//! here calls into the library.

#![allow(dead_code)]

use std::f64::consts::PI;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

/// Σ_k (−1)^k (x/2)^{2k+n} / (k! (k+n)!) in exact arithmetic, x = num/den.
pub fn power_series_j(n: u32, num: i64, den: i64, terms: u32) -> f64 {
    let half_x = BigRational::new(BigInt::from(num), BigInt::from(2 * den));
    let mut term = BigRational::one();
    for i in 1..=n {
        term = term * &half_x / BigRational::from_integer(BigInt::from(i));
    }
    let x2 = &half_x * &half_x;
    let mut sum = BigRational::zero();
    for k in 0..terms {
        if k % 2 == 0 {
            sum += &term;
        } else {
            sum -= &term;
        }
        let denom = BigInt::from(k + 1) * BigInt::from(k + 1 + n);
        term = term * &x2 / BigRational::from_integer(denom);
    }
    sum.to_f64().unwrap()
}

/// J_n(x) = (1/2π) ∫_0^{2π} cos(nτ − x sin τ) dτ; the trapezoid rule is
/// spectrally accurate for this periodic integrand.
pub fn trapezoid_j(n: usize, x: f64) -> f64 {
    let m = 4096;
    let s: f64 = (0..m)
        .map(|k| {
            let tau = 2.0 * PI * k as f64 / m as f64;
            (n as f64 * tau - x * tau.sin()).cos()
        })
        .sum();
    s / m as f64
}

/// dP_n/dt = γ/2 P_{n−1} + γ/2 P_{n+1} − γ P_n on |n| ≤ range, RK4.
pub fn master_equation_rk4(gamma: f64, t: f64, range: usize, steps: usize) -> Vec<f64> {
    let n = 2 * range + 1;
    let mut p = vec![0.0; n];
    p[range] = 1.0;
    let h = t / steps as f64;
    let rhs = |p: &[f64]| -> Vec<f64> {
        (0..n)
            .map(|i| {
                let left = if i > 0 { p[i - 1] } else { 0.0 };
                let right = if i + 1 < n { p[i + 1] } else { 0.0 };
                0.5 * gamma * (left + right) - gamma * p[i]
            })
            .collect()
    };
    for _ in 0..steps {
        let k1 = rhs(&p);
        let y: Vec<f64> = p.iter().zip(&k1).map(|(a, k)| a + 0.5 * h * k).collect();
        let k2 = rhs(&y);
        let y: Vec<f64> = p.iter().zip(&k2).map(|(a, k)| a + 0.5 * h * k).collect();
        let k3 = rhs(&y);
        let y: Vec<f64> = p.iter().zip(&k3).map(|(a, k)| a + h * k).collect();
        let k4 = rhs(&y);
        for i in 0..n {
            p[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
    }
    p
}

