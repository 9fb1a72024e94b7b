//! Rigid and centrifugally distorted diatomic rotor.
//!
//! Units are dimensionless with ℏ = 1. The scaled constructor fixes 2B = 1,
//! so transition frequencies are in units of 2B and the ideal comb's pulse
//! interval is one time unit. Frequencies are ordinary (not angular): every
//! phase is evaluated as `2π ν t`.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

/// Largest accepted D/B ratio.
pub const MAX_DISTORTION_RATIO: f64 = 1e-3;

/// D/B for CsI.
pub const CSI_DISTORTION_RATIO: f64 = 1.57e-7;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RotorSpec {
    /// Rotational constant B.
    pub b: f64,
    /// Centrifugal distortion constant D (same units as B).
    pub d: f64,
    /// Permanent dipole moment.
    pub mu: f64,
    /// Magnetic quantum number, fixed for a run.
    pub m: i32,
    /// Highest comb component index; the ladder spans J = 0 ..= j_max.
    pub j_max: usize,
}

impl RotorSpec {
    pub fn new(b: f64, d_over_b: f64, mu: f64, m: i32, j_max: usize) -> Result<Self> {
        let spec = Self {
            b,
            d: d_over_b * b,
            mu,
            m,
            j_max,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Rotor in scaled units (2B = 1, μ = 1, M = 0).
    pub fn scaled(j_max: usize, d_over_b: f64) -> Result<Self> {
        Self::new(0.5, d_over_b, 1.0, 0, j_max)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.b.is_finite() && self.b > 0.0) {
            return domain(format!("rotational constant B must be positive, got {}", self.b));
        }
        if !(self.d.is_finite() && self.d >= 0.0) {
            return domain(format!("distortion constant D must be non-negative, got {}", self.d));
        }
        if self.d / self.b > MAX_DISTORTION_RATIO {
            return domain(format!(
                "D/B = {} exceeds {MAX_DISTORTION_RATIO}",
                self.d / self.b
            ));
        }
        if !(self.mu.is_finite() && self.mu > 0.0) {
            return domain(format!("dipole moment must be positive, got {}", self.mu));
        }
        if self.j_max < 1 {
            return domain("j_max must be at least 1");
        }
        if self.m.unsigned_abs() as usize > self.j_max {
            return domain(format!(
                "|M| = {} exceeds every state of the ladder (j_max = {})",
                self.m.unsigned_abs(),
                self.j_max
            ));
        }
        Ok(())
    }

    pub fn d_over_b(&self) -> f64 {
        self.d / self.b
    }

    /// Number of rotational states, j_max + 1.
    pub fn ladder_size(&self) -> usize {
        self.j_max + 1
    }

    /// E_J = BJ(J+1), minus DJ²(J+1)² when `distorted`.
    pub fn rotational_energy(&self, j: i64, distorted: bool) -> Result<f64> {
        if j < 0 {
            return domain(format!("rotational quantum number must be non-negative, got {j}"));
        }
        let x = (j * (j + 1)) as f64;
        let mut e = self.b * x;
        if distorted {
            e -= self.d * x * x;
        }
        Ok(e)
    }

    /// Frequency of the J → J+1 transition: 2B(J+1), minus 4D(J+1)³ when
    /// `distorted`.
    pub fn transition_frequency(&self, j: i64, distorted: bool) -> Result<f64> {
        self.check_transition(j)?;
        Ok(self.frequency_unchecked(j as usize, distorted))
    }

    fn frequency_unchecked(&self, j: usize, distorted: bool) -> f64 {
        let k = (j + 1) as f64;
        let mut nu = 2.0 * self.b * k;
        if distorted {
            nu -= 4.0 * self.d * k * k * k;
        }
        nu
    }

    /// Transition dipole of J → J+1:
    /// μ·sqrt(((J+1)² − M²) / ((2J+1)(2J+3))).
    pub fn transition_dipole(&self, j: i64) -> Result<f64> {
        self.check_transition(j)?;
        let m = self.m.unsigned_abs() as i64;
        if m > j + 1 {
            return domain(format!("transition J = {j} -> {} is forbidden for |M| = {m}", j + 1));
        }
        Ok(dipole_closed_form(self.mu, self.m, j))
    }

    /// All transition frequencies J = 0 .. j_max-1.
    pub fn transition_frequencies(&self, distorted: bool) -> Vec<f64> {
        (0..self.j_max)
            .map(|j| self.frequency_unchecked(j, distorted))
            .collect()
    }

    /// All transition dipoles J = 0 .. j_max-1.
    pub fn transition_dipoles(&self) -> Result<Vec<f64>> {
        (0..self.j_max as i64)
            .map(|j| self.transition_dipole(j))
            .collect()
    }

    fn check_transition(&self, j: i64) -> Result<()> {
        if j < 0 || j >= self.j_max as i64 {
            return domain(format!(
                "transition index {j} outside ladder 0..={}",
                self.j_max - 1
            ));
        }
        Ok(())
    }
}

fn dipole_closed_form(mu: f64, m: i32, j: i64) -> f64 {
    let jf = j as f64;
    let mf = m as f64;
    let num = (jf + 1.0) * (jf + 1.0) - mf * mf;
    let den = (2.0 * jf + 1.0) * (2.0 * jf + 3.0);
    mu * (num / den).sqrt()
}
