//! Optical-frequency-comb field synthesis.
//!
//! The field is a finite sum of zero-phase cosines, one per rotational
//! transition, with amplitude γ/μ_J so that every transition sees the same
//! resonant coupling γ/2. The chirped variant tunes each component to the
//! distorted transition frequency; its chirp is a property of the sum, not
//! of any envelope model.

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::rotor::RotorSpec;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CombComponent {
    pub amplitude: f64,
    pub frequency: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CombSpec {
    pub components: Vec<CombComponent>,
    /// Hopping rate, in units of 2B for a scaled rotor.
    pub gamma: f64,
    /// Components sit on the distorted transition frequencies.
    pub distorted: bool,
    pub rotor: RotorSpec,
}

/// Uniformly sampled field.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FieldProfile {
    pub times: Vec<f64>,
    pub values: Vec<f64>,
}

/// Build the comb resonant with `rotor`'s transitions.
///
/// `gamma = 0` is accepted and yields a field that vanishes identically.
pub fn build_comb(rotor: &RotorSpec, gamma: f64, distorted: bool) -> Result<CombSpec> {
    rotor.validate()?;
    if !(gamma.is_finite() && gamma >= 0.0) {
        return domain(format!("hopping rate gamma must be non-negative, got {gamma}"));
    }
    let dipoles = rotor.transition_dipoles()?;
    if let Some(j) = dipoles.iter().position(|&m| m <= 0.0) {
        return domain(format!(
            "transition {j} -> {} has zero dipole for M = {}; comb amplitude undefined",
            j + 1,
            rotor.m
        ));
    }
    let frequencies = rotor.transition_frequencies(distorted);
    if let Some(j) = frequencies.windows(2).position(|w| w[1] <= w[0]) {
        return domain(format!(
            "distorted transition frequencies stop increasing at J = {}; D/B too large for j_max = {}",
            j + 1,
            rotor.j_max
        ));
    }
    let components = dipoles
        .iter()
        .zip(frequencies)
        .map(|(&mu_j, frequency)| CombComponent {
            amplitude: gamma / mu_j,
            frequency,
        })
        .collect();
    Ok(CombSpec {
        components,
        gamma,
        distorted,
        rotor: *rotor,
    })
}

impl CombSpec {
    pub fn amplitudes(&self) -> Vec<f64> {
        self.components.iter().map(|c| c.amplitude).collect()
    }

    pub fn frequencies(&self) -> Vec<f64> {
        self.components.iter().map(|c| c.frequency).collect()
    }

    pub fn highest_frequency(&self) -> f64 {
        self.components
            .iter()
            .map(|c| c.frequency)
            .fold(0.0, f64::max)
    }

    /// Σ|amplitude|, the field's value at t = 0 and its global bound.
    pub fn peak_bound(&self) -> f64 {
        self.components.iter().map(|c| c.amplitude.abs()).sum()
    }

    /// ε(t) = Σ a_k cos(2π ν_k t).
    pub fn field_amplitude(&self, t: f64) -> f64 {
        self.components
            .iter()
            .map(|c| c.amplitude * (TAU * c.frequency * t).cos())
            .sum()
    }

    /// `n` uniform samples of the field over `[t0, t1]`, endpoints included.
    pub fn sample_profile(&self, t0: f64, t1: f64, n: usize) -> Result<FieldProfile> {
        if n < 2 {
            return domain(format!("profile needs at least 2 samples, got {n}"));
        }
        if !(t0.is_finite() && t1.is_finite() && t1 > t0) {
            return domain(format!("profile window [{t0}, {t1}] is empty"));
        }
        let dt = (t1 - t0) / (n - 1) as f64;
        let times: Vec<f64> = (0..n)
            .map(|i| if i == n - 1 { t1 } else { t0 + i as f64 * dt })
            .collect();
        let values = times.iter().map(|&t| self.field_amplitude(t)).collect();
        Ok(FieldProfile { times, values })
    }
}

impl FieldProfile {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// RMS duration of ε² over samples with `t` in `[lo, hi)`, about its
    /// centroid. Used to compare individual pulses of a train.
    pub fn envelope_width(&self, lo: f64, hi: f64) -> Option<f64> {
        let (mut w, mut wt, mut wt2) = (0.0, 0.0, 0.0);
        for (&t, &v) in self.times.iter().zip(&self.values) {
            if t >= lo && t < hi {
                let p = v * v;
                w += p;
                wt += p * t;
                wt2 += p * t * t;
            }
        }
        if w <= 0.0 {
            return None;
        }
        let mean = wt / w;
        Some((wt2 / w - mean * mean).max(0.0).sqrt())
    }
}
