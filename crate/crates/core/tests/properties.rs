use combwalk::metrics::total_variation;
use combwalk::{build_comb, LatticeDistribution, RotorSpec};
use proptest::prelude::*;

fn rotor_strategy() -> impl Strategy<Value = RotorSpec> {
    (0.05f64..5.0, 0.0f64..1e-5, 0.2f64..3.0, 1usize..80)
        .prop_map(|(b, ratio, mu, j_max)| RotorSpec::new(b, ratio, mu, 0, j_max).unwrap())
}

fn distribution(len: usize) -> impl Strategy<Value = LatticeDistribution> {
    (-5i64..5, prop::collection::vec(0.0f64..1.0, len)).prop_map(|(first, raw)| {
        let total: f64 = raw.iter().sum::<f64>().max(1e-12);
        LatticeDistribution::contiguous(first, raw.iter().map(|v| v / total).collect()).unwrap()
    })
}

proptest! {
    #[test]
    fn frequency_is_energy_gap(rotor in rotor_strategy(), distorted in any::<bool>()) {
        for j in 0..rotor.j_max as i64 {
            let gap = rotor.rotational_energy(j + 1, distorted).unwrap()
                - rotor.rotational_energy(j, distorted).unwrap();
            let nu = rotor.transition_frequency(j, distorted).unwrap();
            let scale = rotor.rotational_energy(j + 1, false).unwrap();
            prop_assert!((gap - nu).abs() <= 1e-12 * scale);
        }
    }

    #[test]
    fn rigid_spacing_and_distorted_shrinkage(rotor in rotor_strategy()) {
        let rigid = rotor.transition_frequencies(false);
        for w in rigid.windows(2) {
            prop_assert!((w[1] - w[0] - 2.0 * rotor.b).abs() <= 1e-12 * w[1]);
        }
        if rotor.d > 0.0 {
            for w in rotor.transition_frequencies(true).windows(2) {
                prop_assert!(w[1] - w[0] < 2.0 * rotor.b);
            }
        }
    }

    #[test]
    fn comb_amplitude_law(rotor in rotor_strategy(), gamma in 0.01f64..5.0, distorted in any::<bool>()) {
        let comb = build_comb(&rotor, gamma, distorted).unwrap();
        prop_assert_eq!(comb.components.len(), rotor.j_max);
        for (j, c) in comb.components.iter().enumerate() {
            let mu = rotor.transition_dipole(j as i64).unwrap();
            prop_assert!(c.amplitude > 0.0);
            prop_assert!((c.amplitude - gamma / mu).abs() <= 1e-12 * c.amplitude);
        }
        prop_assert!(comb.components.windows(2).all(|w| w[1].frequency > w[0].frequency));
    }

    #[test]
    fn comb_parity(rotor in rotor_strategy(), t in -50.0f64..50.0, distorted in any::<bool>()) {
        let comb = build_comb(&rotor, 1.0, distorted).unwrap();
        prop_assert_eq!(comb.field_amplitude(-t), comb.field_amplitude(t));
    }

    #[test]
    fn tv_metric_axioms(p in distribution(12), q in distribution(9), r in distribution(15)) {
        let pq = total_variation(&p, &q).unwrap();
        let qp = total_variation(&q, &p).unwrap();
        prop_assert_eq!(pq, qp);
        prop_assert!((0.0..=1.0 + 1e-9).contains(&pq));
        prop_assert_eq!(total_variation(&p, &p).unwrap(), 0.0);
        let pr = total_variation(&p, &r).unwrap();
        let rq = total_variation(&r, &q).unwrap();
        prop_assert!(pq <= pr + rq + 1e-12);
    }

    #[test]
    fn tv_zero_means_equal(p in distribution(10), shift in -3i64..3) {
        let q = p.shifted(shift);
        if total_variation(&p, &q).unwrap() <= 1e-12 {
            for (n, v) in p.iter() {
                prop_assert!((v - q.get(n)).abs() <= 1e-12);
            }
        }
    }
}

#[test]
fn overdistorted_ladder_rejected() {
    // Distorted gaps close near J ≈ sqrt(B / 6D); a comb past that point
    // would not have increasing frequencies.
    let rotor = RotorSpec::scaled(200, 1e-4).unwrap();
    assert!(build_comb(&rotor, 1.0, true).is_err());
    assert!(build_comb(&rotor, 1.0, false).is_ok());
}

#[test]
fn ideal_comb_periodicity() {
    let rotor = RotorSpec::scaled(200, 0.0).unwrap();
    let comb = build_comb(&rotor, 1.0, false).unwrap();
    let bound = comb.peak_bound();
    let mut rng_state: u64 = 0x9e37_79b9_7f4a_7c15;
    for _ in 0..1000 {
        rng_state = rng_state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        let t = 50.0 * (rng_state >> 11) as f64 / (1u64 << 53) as f64;
        let diff = (comb.field_amplitude(t + 1.0) - comb.field_amplitude(t)).abs();
        assert!(diff <= 1e-9 * bound, "t={t}: {diff}");
    }
}

#[test]
fn chirped_edge_pulses() {
    let rotor = RotorSpec::scaled(200, combwalk::rotor::CSI_DISTORTION_RATIO).unwrap();
    let comb = build_comb(&rotor, 1.0, true).unwrap();
    let profile = comb.sample_profile(-12.5, 12.5, 100_001).unwrap();
    let first = profile.envelope_width(-12.5, -11.5).unwrap();
    let centre = profile.envelope_width(-0.5, 0.5).unwrap();
    let last = profile.envelope_width(11.5, 12.5).unwrap();
    assert!(first > 3.0 * centre, "first {first} centre {centre}");
    assert!((first - last).abs() <= 1e-3 * first, "first {first} last {last}");

    // Mirror images of each other, but not translates: the chirp flips sign.
    let amp = comb.peak_bound();
    let (mut mirror, mut translate): (f64, f64) = (0.0, 0.0);
    for k in 0..=400 {
        let s = -0.2 + 0.001 * k as f64;
        mirror = mirror.max((comb.field_amplitude(-12.0 + s) - comb.field_amplitude(12.0 - s)).abs());
        translate =
            translate.max((comb.field_amplitude(-12.0 + s) - comb.field_amplitude(12.0 + s)).abs());
    }
    assert!(mirror <= 1e-9 * amp);
    assert!(translate > 0.05 * amp, "{translate}");
}
