use combwalk::metrics::ladder_distribution;
use combwalk::{
    build_comb, compare, ctqw_infinite, propagate, propagate_rwa, FieldEvaluation, PathGraphPropagator,
    RotorSpec, RunConfig, WalkState,
};
use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

#[test]
fn rotators_match_direct_evaluation() {
    let rotor = RotorSpec::scaled(40, combwalk::rotor::CSI_DISTORTION_RATIO).unwrap();
    let comb = build_comb(&rotor, 1.0, true).unwrap();
    let start = WalkState::basis(41, 20, -0.5).unwrap();
    let base = RunConfig::new(-0.5, 7.5, 20, &comb).with_snapshot_interval(1.0);
    let a = propagate(&start, &comb, &rotor, &base.clone().with_field_evaluation(FieldEvaluation::Direct), true)
        .unwrap();
    let b = propagate(&start, &comb, &rotor, &base.with_field_evaluation(FieldEvaluation::Rotators), true)
        .unwrap();
    for (sa, sb) in a.snapshots.iter().zip(&b.snapshots) {
        assert_eq!(sa.time, sb.time);
        for (x, y) in sa.amplitudes.iter().zip(&sb.amplitudes) {
            assert!((x - y).norm() <= 1e-10);
        }
    }
}

#[test]
fn reflection_symmetry_about_start() {
    let rotor = RotorSpec::scaled(80, 0.0).unwrap();
    let comb = build_comb(&rotor, 1.0, false).unwrap();
    let start = WalkState::basis(81, 40, -0.5).unwrap();
    let cfg = RunConfig::new(-0.5, 19.5, 40, &comb).with_snapshot_interval(1.0);
    let traj = propagate(&start, &comb, &rotor, &cfg, false).unwrap();
    for p in &traj.populations {
        for n in 1..=35 {
            assert!((p[40 + n] - p[40 - n]).abs() <= 1e-4, "n={n}");
        }
    }
}

#[test]
fn rwa_matches_bessel_on_wide_lattice() {
    let start = WalkState::basis(401, 200, 0.0).unwrap();
    let end = propagate_rwa(&start, 1.0, 10.0).unwrap();
    for (j, c) in end.amplitudes.iter().enumerate() {
        let inf = ctqw_infinite(j as i64 - 200, 10.0, 1.0);
        assert!((c.norm_sqr() - inf.norm_sqr()).abs() <= 1e-10);
    }
}

#[test]
fn closed_form_spectrum_matches_dense_diagonalization() {
    let n = 17;
    let gamma = 1.7;
    let h = DMatrix::from_fn(n, n, |i, j| if i.abs_diff(j) == 1 { -gamma / 2.0 } else { 0.0 });
    let eig = SymmetricEigen::new(h);
    let mut dense: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    dense.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let closed = PathGraphPropagator::new(n).eigenvalues(gamma);
    for (a, b) in dense.iter().zip(&closed) {
        assert!((a - b).abs() < 1e-12);
    }

    // exp(−iHt) from the dense eigensystem
    let t = 3.3;
    let start = WalkState::basis(n, 4, 0.0).unwrap();
    let v = &eig.eigenvectors;
    let reference: Vec<Complex64> = (0..n)
        .map(|i| {
            (0..n)
                .map(|k| {
                    Complex64::from_polar(1.0, -eig.eigenvalues[k] * t) * v[(i, k)] * v[(4, k)]
                })
                .sum()
        })
        .collect();
    let got = propagate_rwa(&start, gamma, t).unwrap();
    for (a, b) in got.amplitudes.iter().zip(&reference) {
        assert!((a - b).norm() < 1e-12);
    }
}

#[test]
fn rwa_preserves_random_norms() {
    let mut seed: u64 = 12345;
    let mut next = || {
        seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1);
        (seed >> 11) as f64 / (1u64 << 53) as f64 - 0.5
    };
    for size in [2, 5, 33, 120] {
        let raw: Vec<Complex64> = (0..size).map(|_| Complex64::new(next(), next())).collect();
        let norm = raw.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        let s = WalkState {
            amplitudes: raw.iter().map(|c| c / norm).collect(),
            time: 0.0,
        };
        let e = propagate_rwa(&s, 0.9, 123.4).unwrap();
        assert!((e.norm_sqr() - 1.0).abs() <= 1e-12);
    }
}

#[test]
fn scaled_ideal_run_tracks_oracle() {
    let rotor = RotorSpec::scaled(60, 0.0).unwrap();
    let comb = build_comb(&rotor, 1.0, false).unwrap();
    let start = WalkState::basis(61, 30, -0.5).unwrap();
    let cfg = RunConfig::new(-0.5, 9.5, 30, &comb).with_snapshot_interval(1.0);
    let traj = propagate(&start, &comb, &rotor, &cfg, false).unwrap();
    for (state, pops) in traj.snapshots.iter().zip(&traj.populations) {
        let rwa = propagate_rwa(&start, 1.0, state.time + 0.5).unwrap();
        let sim = ladder_distribution(pops, 30).unwrap();
        let reference = ladder_distribution(&rwa.populations(), 30).unwrap();
        assert!(compare(&sim, &reference).unwrap().total_variation <= 0.02);
    }
    assert!(traj.max_norm_drift() <= 1e-6);
}
