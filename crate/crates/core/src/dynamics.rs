//! Driven rotational-ladder dynamics.
//!
//! In the interaction picture the amplitudes obey
//!
//! ```text
//! dc_J/dt = i [ μ_{J−1} ε(t) e^{+2πiν_{J−1}t} c_{J−1} + μ_J ε(t) e^{−2πiν_J t} c_{J+1} ]
//! ```
//!
//! with the ladder truncated at J = 0 and J = j_max. The full equation is
//! integrated with fixed-step RK4; the resonant part alone (uniform hopping
//! γ/2) is propagated exactly by [`propagate_rwa`].

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::comb::CombSpec;
use crate::error::{domain, Error, Result};
use crate::oracles::PathGraphPropagator;
use crate::rotor::RotorSpec;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

/// Phase rotators are re-seeded from exact trigonometry this often (in steps).
const RESYNC_INTERVAL: usize = 512;

/// Initial states must be normalized to this tolerance.
const NORM_TOLERANCE: f64 = 1e-9;

/// Default resolution: samples per period of the fastest comb component.
pub const SAMPLES_PER_FASTEST_PERIOD: usize = 64;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WalkState {
    /// c_J for J = 0 ..= j_max.
    pub amplitudes: Vec<Complex64>,
    pub time: f64,
}

impl WalkState {
    /// All population in state `j`.
    pub fn basis(dim: usize, j: usize, time: f64) -> Result<Self> {
        if j >= dim {
            return domain(format!("initial state {j} outside ladder of {dim} states"));
        }
        let mut amplitudes = vec![ZERO; dim];
        amplitudes[j] = Complex64::new(1.0, 0.0);
        Ok(Self { amplitudes, time })
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn populations(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|c| c.norm_sqr()).collect()
    }
}

/// How the comb phases are produced on the RK4 grid.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FieldEvaluation {
    /// cos/sin evaluated at every stage time.
    Direct,
    /// Phases advanced by precomputed half-step rotations, periodically
    /// re-seeded from exact values.
    #[default]
    Rotators,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub t_start: f64,
    pub t_end: f64,
    pub steps_per_unit_time: usize,
    /// Sorted times in `[t_start, t_end]`; each is snapped to the nearest
    /// step of the grid.
    pub snapshot_times: Vec<f64>,
    pub initial_j: usize,
    #[serde(default)]
    pub field_evaluation: FieldEvaluation,
}

impl RunConfig {
    /// Window with a snapshot at the end only and the default resolution for
    /// `comb`.
    pub fn new(t_start: f64, t_end: f64, initial_j: usize, comb: &CombSpec) -> Self {
        Self {
            t_start,
            t_end,
            steps_per_unit_time: default_steps_per_unit_time(comb),
            snapshot_times: vec![t_end],
            initial_j,
            field_evaluation: FieldEvaluation::default(),
        }
    }

    /// Snapshots at `t_start + k·interval` up to and including `t_end`.
    pub fn with_snapshot_interval(mut self, interval: f64) -> Self {
        self.snapshot_times = snapshot_grid(self.t_start, self.t_end, interval);
        self
    }

    pub fn with_steps(mut self, steps_per_unit_time: usize) -> Self {
        self.steps_per_unit_time = steps_per_unit_time;
        self
    }

    pub fn with_field_evaluation(mut self, mode: FieldEvaluation) -> Self {
        self.field_evaluation = mode;
        self
    }

    pub fn step_size(&self) -> f64 {
        1.0 / self.steps_per_unit_time as f64
    }

    pub fn total_steps(&self) -> usize {
        ((self.t_end - self.t_start) * self.steps_per_unit_time as f64).round() as usize
    }

    fn step_index(&self, t: f64) -> usize {
        ((t - self.t_start) * self.steps_per_unit_time as f64).round() as usize
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.t_start.is_finite() && self.t_end.is_finite() && self.t_end > self.t_start) {
            return domain(format!(
                "time window [{}, {}] is empty",
                self.t_start, self.t_end
            ));
        }
        if self.steps_per_unit_time < 1 {
            return domain("steps_per_unit_time must be at least 1");
        }
        if self.total_steps() == 0 {
            return domain("time window shorter than one step");
        }
        if self.snapshot_times.windows(2).any(|w| w[1] < w[0]) {
            return domain("snapshot times must be sorted");
        }
        let slack = 0.5 * self.step_size();
        if let Some(t) = self
            .snapshot_times
            .iter()
            .find(|&&t| !(t >= self.t_start - slack && t <= self.t_end + slack))
        {
            return domain(format!(
                "snapshot time {t} outside window [{}, {}]",
                self.t_start, self.t_end
            ));
        }
        Ok(())
    }
}

/// 64 steps per period of the fastest comb component, and at least 64 per
/// time unit.
pub fn default_steps_per_unit_time(comb: &CombSpec) -> usize {
    let fastest = comb.highest_frequency().ceil().max(1.0) as usize;
    SAMPLES_PER_FASTEST_PERIOD * fastest
}

fn snapshot_grid(t_start: f64, t_end: f64, interval: f64) -> Vec<f64> {
    if !(interval > 0.0) {
        return vec![t_end];
    }
    let count = ((t_end - t_start) / interval + 1e-9).floor() as usize;
    let mut times: Vec<f64> = (1..=count).map(|k| t_start + k as f64 * interval).collect();
    if times.last().is_none_or(|&t| (t - t_end).abs() > 1e-9) {
        times.push(t_end);
    }
    times
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub snapshots: Vec<WalkState>,
    /// |c_J|² for each snapshot.
    pub populations: Vec<Vec<f64>>,
    /// |Σ|c_J|² − 1| for each snapshot.
    pub norm_drift: Vec<f64>,
    pub step_size: f64,
    pub steps: usize,
}

impl Trajectory {
    pub fn final_state(&self) -> &WalkState {
        self.snapshots.last().expect("trajectory has at least one snapshot")
    }

    pub fn final_populations(&self) -> &[f64] {
        self.populations.last().expect("trajectory has at least one snapshot")
    }

    pub fn max_norm_drift(&self) -> f64 {
        self.norm_drift.iter().copied().fold(0.0, f64::max)
    }

    pub fn times(&self) -> Vec<f64> {
        self.snapshots.iter().map(|s| s.time).collect()
    }
}

/// Couplings g_J(t) = μ_J ε(t) e^{−2πiν_J t} on the RK4 grid.
struct CouplingField {
    amplitudes: Vec<f64>,
    comb_freqs: Vec<f64>,
    dipoles: Vec<f64>,
    ladder_freqs: Vec<f64>,
    comb_phase: Vec<Complex64>,
    ladder_phase: Vec<Complex64>,
    comb_rotor: Vec<Complex64>,
    ladder_rotor: Vec<Complex64>,
    couplings: Vec<Complex64>,
}

impl CouplingField {
    fn new(comb: &CombSpec, rotor: &RotorSpec, distorted: bool, half_step: f64) -> Result<Self> {
        let amplitudes = comb.amplitudes();
        let comb_freqs = comb.frequencies();
        let dipoles = rotor.transition_dipoles()?;
        let ladder_freqs = rotor.transition_frequencies(distorted);
        let rot = |f: &f64| Complex64::from_polar(1.0, TAU * f * half_step);
        Ok(Self {
            comb_rotor: comb_freqs.iter().map(rot).collect(),
            ladder_rotor: ladder_freqs.iter().map(rot).collect(),
            comb_phase: vec![ZERO; comb_freqs.len()],
            ladder_phase: vec![ZERO; ladder_freqs.len()],
            couplings: vec![ZERO; ladder_freqs.len()],
            amplitudes,
            comb_freqs,
            dipoles,
            ladder_freqs,
        })
    }

    fn set_time(&mut self, t: f64) {
        for (z, f) in self.comb_phase.iter_mut().zip(&self.comb_freqs) {
            *z = Complex64::from_polar(1.0, TAU * f * t);
        }
        for (w, f) in self.ladder_phase.iter_mut().zip(&self.ladder_freqs) {
            *w = Complex64::from_polar(1.0, TAU * f * t);
        }
        self.refresh();
    }

    fn advance_half_step(&mut self) {
        for (z, r) in self.comb_phase.iter_mut().zip(&self.comb_rotor) {
            *z *= r;
        }
        for (w, r) in self.ladder_phase.iter_mut().zip(&self.ladder_rotor) {
            *w *= r;
        }
        self.refresh();
    }

    fn refresh(&mut self) {
        let field: f64 = self
            .amplitudes
            .iter()
            .zip(&self.comb_phase)
            .map(|(a, z)| a * z.re)
            .sum();
        for ((g, mu), w) in self.couplings.iter_mut().zip(&self.dipoles).zip(&self.ladder_phase) {
            *g = w.conj() * (mu * field);
        }
    }
}

/// out_J = i (conj(g_{J−1}) c_{J−1} + g_J c_{J+1})
fn apply_coupling(g: &[Complex64], c: &[Complex64], out: &mut [Complex64]) {
    let n = c.len();
    for j in 0..n {
        let mut acc = ZERO;
        if j > 0 {
            acc += g[j - 1].conj() * c[j - 1];
        }
        if j + 1 < n {
            acc += g[j] * c[j + 1];
        }
        out[j] = I * acc;
    }
}

fn check_dims(state: &WalkState, comb: &CombSpec, rotor: &RotorSpec) -> Result<()> {
    if state.dim() != rotor.ladder_size() {
        return Err(Error::Dimension {
            expected: rotor.ladder_size(),
            got: state.dim(),
        });
    }
    if comb.components.len() != rotor.j_max {
        return domain(format!(
            "comb has {} components but the rotor has {} transitions",
            comb.components.len(),
            rotor.j_max
        ));
    }
    Ok(())
}

/// Right-hand side dc/dt at time `t`, with the field evaluated directly.
///
/// `distorted` selects the rotor's transition frequencies in the
/// interaction-picture phases; the comb carries its own frequencies.
pub fn derivative(
    state: &WalkState,
    t: f64,
    comb: &CombSpec,
    rotor: &RotorSpec,
    distorted: bool,
) -> Result<Vec<Complex64>> {
    check_dims(state, comb, rotor)?;
    let mut field = CouplingField::new(comb, rotor, distorted, 0.0)?;
    field.set_time(t);
    let mut out = vec![ZERO; state.dim()];
    apply_coupling(&field.couplings, &state.amplitudes, &mut out);
    Ok(out)
}

/// Fixed-step RK4 over `config`'s window, starting from `initial` at
/// `config.t_start`.
pub fn propagate(
    initial: &WalkState,
    comb: &CombSpec,
    rotor: &RotorSpec,
    config: &RunConfig,
    distorted: bool,
) -> Result<Trajectory> {
    config.validate()?;
    check_dims(initial, comb, rotor)?;
    let norm0 = initial.norm_sqr();
    if (norm0 - 1.0).abs() > NORM_TOLERANCE {
        return domain(format!("initial state has norm² {norm0}, expected 1"));
    }

    let h = config.step_size();
    let steps = config.total_steps();
    let t_at = |k: usize| config.t_start + k as f64 * h;
    let mut snapshot_steps: Vec<usize> = config
        .snapshot_times
        .iter()
        .map(|&t| config.step_index(t).min(steps))
        .collect();
    if snapshot_steps.is_empty() {
        snapshot_steps.push(steps);
    }

    let n = initial.dim();
    let mut c = initial.amplitudes.clone();
    let mut k1 = vec![ZERO; n];
    let mut k2 = vec![ZERO; n];
    let mut k3 = vec![ZERO; n];
    let mut k4 = vec![ZERO; n];
    let mut tmp = vec![ZERO; n];

    let mut field_start = CouplingField::new(comb, rotor, distorted, 0.5 * h)?;
    field_start.set_time(config.t_start);
    let mut g_start = field_start.couplings.clone();
    let mut g_mid = vec![ZERO; rotor.j_max];
    let mut field = field_start;

    let mut snapshots = Vec::with_capacity(snapshot_steps.len());
    let mut next = 0;
    let record = |k: usize, c: &[Complex64], snapshots: &mut Vec<WalkState>, next: &mut usize| {
        while *next < snapshot_steps.len() && snapshot_steps[*next] == k {
            snapshots.push(WalkState {
                amplitudes: c.to_vec(),
                time: t_at(k),
            });
            *next += 1;
        }
    };
    record(0, &c, &mut snapshots, &mut next);

    for step in 0..steps {
        let t = t_at(step);
        match config.field_evaluation {
            FieldEvaluation::Direct => field.set_time(t + 0.5 * h),
            FieldEvaluation::Rotators => field.advance_half_step(),
        }
        g_mid.copy_from_slice(&field.couplings);

        apply_coupling(&g_start, &c, &mut k1);
        for j in 0..n {
            tmp[j] = c[j] + k1[j] * (0.5 * h);
        }
        apply_coupling(&g_mid, &tmp, &mut k2);
        for j in 0..n {
            tmp[j] = c[j] + k2[j] * (0.5 * h);
        }
        apply_coupling(&g_mid, &tmp, &mut k3);
        for j in 0..n {
            tmp[j] = c[j] + k3[j] * h;
        }

        let end = step + 1;
        match config.field_evaluation {
            FieldEvaluation::Rotators if end % RESYNC_INTERVAL != 0 => field.advance_half_step(),
            _ => field.set_time(t_at(end)),
        }
        g_start.copy_from_slice(&field.couplings);
        apply_coupling(&g_start, &tmp, &mut k4);

        let sixth = h / 6.0;
        let mut norm = 0.0;
        for j in 0..n {
            c[j] += (k1[j] + (k2[j] + k3[j]) * 2.0 + k4[j]) * sixth;
            norm += c[j].norm_sqr();
        }
        if !norm.is_finite() {
            return Err(Error::Integration {
                step: end,
                time: t_at(end),
            });
        }
        record(end, &c, &mut snapshots, &mut next);
    }

    let populations: Vec<Vec<f64>> = snapshots.iter().map(WalkState::populations).collect();
    let norm_drift = populations
        .iter()
        .map(|p| (p.iter().sum::<f64>() - 1.0).abs())
        .collect();
    Ok(Trajectory {
        snapshots,
        populations,
        norm_drift,
        step_size: h,
        steps,
    })
}

/// Exact evolution for time `t` under uniform hopping −γ/2 on the ladder,
/// i.e. the driven dynamics with every detuned term dropped.
pub fn propagate_rwa(initial: &WalkState, gamma: f64, t: f64) -> Result<WalkState> {
    if !(t >= 0.0) {
        return domain(format!("propagation time must be non-negative, got {t}"));
    }
    let amplitudes = PathGraphPropagator::new(initial.dim()).evolve(&initial.amplitudes, gamma, t)?;
    Ok(WalkState {
        amplitudes,
        time: initial.time + t,
    })
}
