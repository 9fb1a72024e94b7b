//! Experiment configuration: a TOML document with one table per concern.
//!
//! Every table has defaults reproducing the ideal-comb run (j_max = 200,
//! γ = 2B, start in J = 100 at t = −0.5, fifty pulses), so a preset only
//! states what differs. Quantities are in scaled units (2B = 1) unless
//! `rotor.b_hz` is set, in which case `comb.gamma` and `oracle.gamma` are in
//! Hz and all times are in seconds.

use std::path::{Path, PathBuf};

use combwalk::dynamics::default_steps_per_unit_time;
use combwalk::{build_comb, CombSpec, FieldEvaluation, RotorSpec, RunConfig};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default = "default_name")]
    pub name: String,
    #[serde(default)]
    pub rotor: RotorSection,
    #[serde(default)]
    pub comb: CombSection,
    #[serde(default)]
    pub run: RunSection,
    #[serde(default)]
    pub output: OutputSection,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub profile: Option<ProfileSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepSection>,
}

fn default_name() -> String {
    "experiment".into()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RotorSection {
    pub j_max: usize,
    pub d_over_b: f64,
    pub mu: f64,
    pub m: i32,
    /// Rotational constant in Hz; switches gamma and times to physical units.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b_hz: Option<f64>,
}

impl Default for RotorSection {
    fn default() -> Self {
        Self {
            j_max: 200,
            d_over_b: 0.0,
            mu: 1.0,
            m: 0,
            b_hz: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CombSection {
    pub gamma: f64,
    /// Tune the comb to the distorted transition frequencies.
    pub chirped: bool,
}

impl Default for CombSection {
    fn default() -> Self {
        Self {
            gamma: 1.0,
            chirped: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunSection {
    pub t_start: f64,
    pub t_end: f64,
    pub initial_j: usize,
    /// Snapshot every this many time units after `t_start`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub snapshot_interval: Option<f64>,
    /// Extra snapshot times; `t_end` is always recorded.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub snapshot_times: Vec<f64>,
    /// Defaults to 64 steps per period of the fastest comb component.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub steps_per_unit_time: Option<usize>,
    #[serde(default)]
    pub field_evaluation: FieldEvaluation,
}

impl Default for RunSection {
    fn default() -> Self {
        Self {
            t_start: -0.5,
            t_end: 49.5,
            initial_j: 100,
            snapshot_interval: Some(1.0),
            snapshot_times: Vec::new(),
            steps_per_unit_time: None,
            field_evaluation: FieldEvaluation::Rotators,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub directory: Option<PathBuf>,
    pub formats: Vec<Format>,
}

impl Default for OutputSection {
    fn default() -> Self {
        Self {
            directory: None,
            formats: vec![Format::Csv],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProfileSection {
    pub t0: f64,
    pub t1: f64,
    pub samples: usize,
    /// One profile per listed j_max; empty means `rotor.j_max` only.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub j_max: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OracleKind {
    /// Infinite-lattice quantum walk, J²_|n|(γt).
    Ctqw,
    /// Classical continuous-time random walk, e^{−γt} I_|n|(γt).
    Classical,
    /// Quantum walk on 2·range+1 sites started at the centre.
    Finite,
}

impl OracleKind {
    pub fn label(self) -> &'static str {
        match self {
            OracleKind::Ctqw => "ctqw",
            OracleKind::Classical => "classical",
            OracleKind::Finite => "finite",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OracleSection {
    pub kinds: Vec<OracleKind>,
    pub gamma: f64,
    pub t: f64,
    pub range: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSection {
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub gamma: Vec<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub d_over_b: Vec<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub chirped: Vec<bool>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub steps_per_unit_time: Vec<usize>,
}

impl SweepSection {
    pub fn is_empty(&self) -> bool {
        self.gamma.is_empty()
            && self.d_over_b.is_empty()
            && self.chirped.is_empty()
            && self.steps_per_unit_time.is_empty()
    }
}

/// A configuration resolved into library types, in scaled units.
#[derive(Debug, Clone)]
pub struct ResolvedRun {
    pub rotor: RotorSpec,
    pub comb: CombSpec,
    pub run: RunConfig,
}

impl ResolvedRun {
    /// Rotor phases follow the distorted law whenever the molecule has D > 0.
    pub fn distorted_rotor(&self) -> bool {
        self.rotor.d > 0.0
    }

    /// γt over the whole window.
    pub fn gamma_t(&self) -> f64 {
        self.comb.gamma * (self.run.t_end - self.run.t_start)
    }
}

fn field_err(field: &str, msg: impl std::fmt::Display) -> CliError {
    CliError::Config {
        field: field.to_string(),
        message: msg.to_string(),
    }
}

/// Bundled presets, one per reproduced figure plus two sweeps.
pub const PRESETS: &[(&str, &str)] = &[
    ("paper_fig1", include_str!("../../../presets/paper_fig1.toml")),
    ("paper_fig3", include_str!("../../../presets/paper_fig3.toml")),
    ("paper_fig4", include_str!("../../../presets/paper_fig4.toml")),
    ("paper_fig5", include_str!("../../../presets/paper_fig5.toml")),
    ("paper_fig6", include_str!("../../../presets/paper_fig6.toml")),
    ("sweep_steps", include_str!("../../../presets/sweep_steps.toml")),
    ("sweep_distortion", include_str!("../../../presets/sweep_distortion.toml")),
];

impl ExperimentConfig {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| field_err("<document>", e.message()))
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("configuration serializes")
    }

    pub fn preset(name: &str) -> Option<Self> {
        PRESETS
            .iter()
            .find(|(n, _)| *n == name)
            .map(|(_, text)| Self::parse(text).expect("bundled preset parses"))
    }

    /// Load from a file, or from a bundled preset when `source` names one
    /// and no such file exists.
    pub fn load(source: &str) -> Result<Self, CliError> {
        let path = Path::new(source);
        if path.exists() {
            let text = std::fs::read_to_string(path)
                .map_err(|e| field_err("--config", format!("{}: {e}", path.display())))?;
            return Self::parse(&text);
        }
        Self::preset(source).ok_or_else(|| {
            let names: Vec<_> = PRESETS.iter().map(|(n, _)| *n).collect();
            field_err(
                "--config",
                format!("no file or preset named {source:?} (presets: {})", names.join(", ")),
            )
        })
    }

    /// Multiply to convert config times to scaled time (2B = 1), divide for
    /// rates.
    fn time_scale(&self) -> f64 {
        self.rotor.b_hz.map_or(1.0, |b| 2.0 * b)
    }

    pub fn scaled_gamma(&self, gamma: f64) -> f64 {
        gamma / self.time_scale()
    }

    pub fn scaled_time(&self, t: f64) -> f64 {
        t * self.time_scale()
    }

    pub fn build_rotor(&self, d_over_b: f64, j_max: usize) -> Result<RotorSpec, CliError> {
        if let Some(b) = self.rotor.b_hz {
            if !(b.is_finite() && b > 0.0) {
                return Err(field_err("rotor.b_hz", format!("must be positive, got {b}")));
            }
        }
        if !(d_over_b.is_finite() && d_over_b >= 0.0) {
            return Err(field_err("rotor.d_over_b", format!("must be non-negative, got {d_over_b}")));
        }
        RotorSpec::new(0.5, d_over_b, self.rotor.mu, self.rotor.m, j_max)
            .map_err(|e| field_err("rotor", e))
    }

    /// Resolve with optional sweep overrides.
    pub fn resolve_with(
        &self,
        gamma: f64,
        d_over_b: f64,
        chirped: bool,
        steps: Option<usize>,
    ) -> Result<ResolvedRun, CliError> {
        let rotor = self.build_rotor(d_over_b, self.rotor.j_max)?;
        let gamma = self.scaled_gamma(gamma);
        if !(gamma.is_finite() && gamma >= 0.0) {
            return Err(field_err("comb.gamma", format!("must be non-negative, got {gamma}")));
        }
        let comb = build_comb(&rotor, gamma, chirped).map_err(|e| field_err("comb", e))?;

        let r = &self.run;
        let t_start = self.scaled_time(r.t_start);
        let t_end = self.scaled_time(r.t_end);
        if !(t_start.is_finite() && t_end.is_finite() && t_end > t_start) {
            return Err(field_err(
                "run.t_end",
                format!("window [{}, {}] is empty", r.t_start, r.t_end),
            ));
        }
        if r.initial_j > self.rotor.j_max {
            return Err(field_err(
                "run.initial_j",
                format!("{} outside ladder 0..={}", r.initial_j, self.rotor.j_max),
            ));
        }
        let steps = steps
            .or(r.steps_per_unit_time)
            .unwrap_or_else(|| default_steps_per_unit_time(&comb));
        if steps < 1 {
            return Err(field_err("run.steps_per_unit_time", "must be at least 1"));
        }
        let mut run = RunConfig::new(t_start, t_end, r.initial_j, &comb)
            .with_steps(steps)
            .with_field_evaluation(r.field_evaluation);
        if let Some(interval) = r.snapshot_interval {
            if !(interval.is_finite() && interval > 0.0) {
                return Err(field_err("run.snapshot_interval", format!("must be positive, got {interval}")));
            }
            run = run.with_snapshot_interval(self.scaled_time(interval));
        }
        if !r.snapshot_times.is_empty() {
            if r.snapshot_times.windows(2).any(|w| w[1] < w[0]) {
                return Err(field_err("run.snapshot_times", "must be sorted"));
            }
            let mut times = run.snapshot_times.clone();
            times.extend(r.snapshot_times.iter().map(|&t| self.scaled_time(t)));
            times.sort_by(|a, b| a.total_cmp(b));
            times.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
            run.snapshot_times = times;
        }
        run.validate().map_err(|e| field_err("run.snapshot_times", e))?;
        Ok(ResolvedRun { rotor, comb, run })
    }

    pub fn resolve(&self) -> Result<ResolvedRun, CliError> {
        self.resolve_with(self.comb.gamma, self.rotor.d_over_b, self.comb.chirped, None)
    }

    /// Check every section against the library's preconditions.
    pub fn validate(&self) -> Result<(), CliError> {
        self.resolve()?;
        if self.output.formats.is_empty() {
            return Err(field_err("output.formats", "at least one format is required"));
        }
        if let Some(p) = &self.profile {
            if p.samples < 2 {
                return Err(field_err("profile.samples", format!("must be at least 2, got {}", p.samples)));
            }
            if !(p.t0.is_finite() && p.t1.is_finite() && p.t1 > p.t0) {
                return Err(field_err("profile.t1", format!("window [{}, {}] is empty", p.t0, p.t1)));
            }
            for &j in &p.j_max {
                self.build_rotor(self.rotor.d_over_b, j)
                    .map_err(|e| field_err("profile.j_max", e))?;
            }
        }
        if let Some(o) = &self.oracle {
            if o.kinds.is_empty() {
                return Err(field_err("oracle.kinds", "at least one kind is required"));
            }
            if !(o.t.is_finite() && o.t >= 0.0) {
                return Err(field_err("oracle.t", format!("must be non-negative, got {}", o.t)));
            }
            if !(o.gamma.is_finite() && o.gamma >= 0.0) {
                return Err(field_err("oracle.gamma", format!("must be non-negative, got {}", o.gamma)));
            }
        }
        if let Some(s) = &self.sweep {
            for &g in &s.gamma {
                self.resolve_with(g, self.rotor.d_over_b, self.comb.chirped, None)
                    .map_err(|e| field_err("sweep.gamma", e))?;
            }
            for &d in &s.d_over_b {
                for &chirped in s.chirped.iter().chain(std::iter::once(&self.comb.chirped)) {
                    self.resolve_with(self.comb.gamma, d, chirped, None)
                        .map_err(|e| field_err("sweep.d_over_b", e))?;
                }
            }
            if s.steps_per_unit_time.contains(&0) {
                return Err(field_err("sweep.steps_per_unit_time", "entries must be at least 1"));
            }
        }
        Ok(())
    }

    pub fn output_dir(&self, override_dir: Option<&Path>) -> PathBuf {
        override_dir
            .map(Path::to_path_buf)
            .or_else(|| self.output.directory.clone())
            .unwrap_or_else(|| PathBuf::from("runs").join(&self.name))
    }
}
