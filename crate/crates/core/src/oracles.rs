//! Closed-form references for the walk.
//!
//! * infinite-lattice quantum walk, ψ(n, t) = i^|n| J_|n|(γt);
//! * finite path-graph quantum walk via its closed-form eigensystem;
//! * classical continuous-time random walk, P_n(t) = e^{−γt} I_|n|(γt),
//!   for a master equation with rate γ/2 to each neighbour.
//!
//! Both Bessel families come from downward (Miller) recurrence normalized by
//! a sum rule, so they stay accurate far past the orders where upward
//! recurrence loses everything.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::dynamics::WalkState;
use crate::error::{domain, Error, Result};

const RESCALE_ABOVE: f64 = 1e100;

fn miller_start(n_max: usize, x: f64) -> usize {
    let base = n_max.max(x.ceil() as usize);
    let m = base + 30 + (40.0 * base as f64).sqrt().ceil() as usize;
    m + (m & 1)
}

/// Downward recurrence `b_{k-1} = (2k/x) b_k + sign · b_{k+1}` from a
/// start well above both `n_max` and `x`; returns b_0 ..= b_start with the
/// largest entry scaled to 1.
fn downward(n_max: usize, x: f64, sign: f64) -> Vec<f64> {
    let m = miller_start(n_max, x);
    let mut b = vec![0.0; m + 2];
    b[m] = 1.0;
    for k in (1..=m).rev() {
        b[k - 1] = (2.0 * k as f64 / x) * b[k] + sign * b[k + 1];
        if b[k - 1].abs() > RESCALE_ABOVE {
            b[k - 1..].iter_mut().for_each(|v| *v /= RESCALE_ABOVE);
        }
    }
    b.truncate(m + 1);
    let peak = b.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    b.iter_mut().for_each(|v| *v /= peak);
    b
}

/// J_0(x) ..= J_{n_max}(x).
pub fn bessel_j_sequence(n_max: usize, x: f64) -> Vec<f64> {
    if x == 0.0 {
        let mut out = vec![0.0; n_max + 1];
        out[0] = 1.0;
        return out;
    }
    if x < 0.0 {
        let mut out = bessel_j_sequence(n_max, -x);
        out.iter_mut().skip(1).step_by(2).for_each(|v| *v = -*v);
        return out;
    }
    let b = downward(n_max, x, -1.0);
    // J_0² + 2ΣJ_k² = 1 fixes the magnitude; J_0 + 2ΣJ_2k = 1 fixes the sign.
    let squares: f64 = b[0] * b[0] + 2.0 * b[1..].iter().map(|v| v * v).sum::<f64>();
    let linear: f64 = b[0] + 2.0 * b[2..].iter().step_by(2).sum::<f64>();
    let scale = linear.signum() / squares.sqrt();
    b[..=n_max].iter().map(|v| v * scale).collect()
}

/// Bessel function of the first kind J_n(x).
pub fn bessel_j(n: usize, x: f64) -> f64 {
    bessel_j_sequence(n, x)[n]
}

/// e^{−x} I_0(x) ..= e^{−x} I_{n_max}(x) for x ≥ 0.
pub fn scaled_bessel_i_sequence(n_max: usize, x: f64) -> Vec<f64> {
    if x == 0.0 {
        let mut out = vec![0.0; n_max + 1];
        out[0] = 1.0;
        return out;
    }
    let x_abs = x.abs();
    let b = downward(n_max, x_abs, 1.0);
    // e^x = I_0 + 2ΣI_k
    let total: f64 = b[0] + 2.0 * b[1..].iter().sum::<f64>();
    let mut out: Vec<f64> = b[..=n_max].iter().map(|v| v / total).collect();
    if x < 0.0 {
        // I_n(−x) = (−1)^n I_n(x), and the scaling factor is e^{−|x|}.
        out.iter_mut().skip(1).step_by(2).for_each(|v| *v = -*v);
    }
    out
}

/// Amplitude at site `n` of the infinite-lattice walk started at the origin.
pub fn ctqw_infinite(n: i64, t: f64, gamma: f64) -> Complex64 {
    let order = n.unsigned_abs() as usize;
    let j = bessel_j(order, gamma * t);
    Complex64::new(0.0, 1.0).powu(order as u32) * j
}

/// Probabilities on the integers, with strictly increasing offsets.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LatticeDistribution {
    pub offsets: Vec<i64>,
    pub probabilities: Vec<f64>,
}

impl LatticeDistribution {
    pub fn new(offsets: Vec<i64>, probabilities: Vec<f64>) -> Result<Self> {
        if offsets.len() != probabilities.len() {
            return domain(format!(
                "{} offsets but {} probabilities",
                offsets.len(),
                probabilities.len()
            ));
        }
        if offsets.windows(2).any(|w| w[1] <= w[0]) {
            return domain("offsets must be strictly increasing");
        }
        if let Some(p) = probabilities.iter().find(|p| !(**p >= 0.0)) {
            return domain(format!("probabilities must be non-negative, found {p}"));
        }
        Ok(Self {
            offsets,
            probabilities,
        })
    }

    /// Contiguous distribution starting at offset `first`.
    pub fn contiguous(first: i64, probabilities: Vec<f64>) -> Result<Self> {
        let offsets = (0..probabilities.len() as i64).map(|i| first + i).collect();
        Self::new(offsets, probabilities)
    }

    pub fn delta(at: i64) -> Self {
        Self {
            offsets: vec![at],
            probabilities: vec![1.0],
        }
    }

    /// Same probabilities, offsets moved by `by`.
    pub fn shifted(&self, by: i64) -> Self {
        Self {
            offsets: self.offsets.iter().map(|n| n + by).collect(),
            probabilities: self.probabilities.clone(),
        }
    }

    pub fn total(&self) -> f64 {
        self.probabilities.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.offsets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.offsets.is_empty()
    }

    pub fn get(&self, n: i64) -> f64 {
        self.offsets
            .binary_search(&n)
            .map(|i| self.probabilities[i])
            .unwrap_or(0.0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, f64)> + '_ {
        self.offsets.iter().copied().zip(self.probabilities.iter().copied())
    }
}

/// J²_|n|(γt) for n in −range ..= range.
pub fn ctqw_distribution(t: f64, gamma: f64, range: usize) -> LatticeDistribution {
    let j = bessel_j_sequence(range, gamma * t);
    let probabilities = (-(range as i64)..=range as i64)
        .map(|n| {
            let v = j[n.unsigned_abs() as usize];
            v * v
        })
        .collect();
    LatticeDistribution::contiguous(-(range as i64), probabilities)
        .expect("squares are non-negative")
}

/// Probability at site `n` of the classical walk started at the origin.
pub fn classical_ctrw(n: i64, t: f64, gamma: f64) -> Result<f64> {
    check_classical(t, gamma)?;
    let order = n.unsigned_abs() as usize;
    Ok(scaled_bessel_i_sequence(order, gamma * t)[order])
}

/// e^{−γt} I_|n|(γt) for n in −range ..= range.
pub fn classical_distribution(t: f64, gamma: f64, range: usize) -> Result<LatticeDistribution> {
    check_classical(t, gamma)?;
    let i = scaled_bessel_i_sequence(range, gamma * t);
    let probabilities = (-(range as i64)..=range as i64)
        .map(|n| i[n.unsigned_abs() as usize])
        .collect();
    LatticeDistribution::contiguous(-(range as i64), probabilities)
}

fn check_classical(t: f64, gamma: f64) -> Result<()> {
    if !(t >= 0.0) {
        return domain(format!("classical walk needs t >= 0, got {t}"));
    }
    if !(gamma >= 0.0) {
        return domain(format!("classical walk needs gamma >= 0, got {gamma}"));
    }
    Ok(())
}

/// Exact propagator of the path graph with uniform hopping −γ/2.
///
/// Eigenvectors are sqrt(2/(N+1))·sin(πk(j+1)/(N+1)) with eigenvalues
/// −γ·cos(πk/(N+1)), k = 1 ..= N.
#[derive(Debug, Clone)]
pub struct PathGraphPropagator {
    size: usize,
    /// Row k-1 holds eigenvector k.
    modes: Vec<f64>,
    /// cos(πk/(N+1)); the eigenvalue is −γ times this.
    cosines: Vec<f64>,
}

impl PathGraphPropagator {
    pub fn new(size: usize) -> Self {
        let np1 = (size + 1) as f64;
        let norm = (2.0 / np1).sqrt();
        let mut modes = Vec::with_capacity(size * size);
        for k in 1..=size {
            for j in 0..size {
                modes.push(norm * (PI * (k * (j + 1)) as f64 / np1).sin());
            }
        }
        let cosines = (1..=size).map(|k| (PI * k as f64 / np1).cos()).collect();
        Self {
            size,
            modes,
            cosines,
        }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    /// Eigenvalues for hopping rate `gamma`, ascending in k.
    pub fn eigenvalues(&self, gamma: f64) -> Vec<f64> {
        self.cosines.iter().map(|c| -gamma * c).collect()
    }

    pub fn evolve(&self, amplitudes: &[Complex64], gamma: f64, t: f64) -> Result<Vec<Complex64>> {
        if amplitudes.len() != self.size {
            return Err(Error::Dimension {
                expected: self.size,
                got: amplitudes.len(),
            });
        }
        if t == 0.0 || gamma == 0.0 {
            return Ok(amplitudes.to_vec());
        }
        let n = self.size;
        let mut out = vec![Complex64::new(0.0, 0.0); n];
        for (k, mode) in self.modes.chunks_exact(n).enumerate() {
            let overlap: Complex64 = mode.iter().zip(amplitudes).map(|(v, c)| c * v).sum();
            // e^{−iλt} with λ = −γ cos θ_k
            let rotated = overlap * Complex64::from_polar(1.0, gamma * t * self.cosines[k]);
            for (o, v) in out.iter_mut().zip(mode) {
                *o += rotated * v;
            }
        }
        Ok(out)
    }
}

/// Quantum walk of `size` sites started at `origin`, evolved exactly.
pub fn ctqw_finite(size: usize, origin: usize, t: f64, gamma: f64) -> Result<WalkState> {
    if origin >= size {
        return domain(format!("origin {origin} outside lattice of {size} sites"));
    }
    let start = WalkState::basis(size, origin, 0.0)?;
    let amplitudes = PathGraphPropagator::new(size).evolve(&start.amplitudes, gamma, t)?;
    Ok(WalkState { amplitudes, time: t })
}
