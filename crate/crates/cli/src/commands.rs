use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use combwalk::io::{
    read_distribution_csv, write_distribution_csv, write_profile_csv, write_trajectory_csv,
    write_trajectory_json,
};
use combwalk::metrics::ladder_distribution;
use combwalk::{
    build_comb, classical_distribution, compare, ctqw_distribution, ctqw_finite, propagate,
    ComparisonReport, LatticeDistribution, Trajectory, WalkState,
};
use serde::Serialize;

use crate::config::{ExperimentConfig, Format, OracleKind, ResolvedRun};
use crate::error::CliError;

#[derive(Debug, Clone, Serialize)]
pub struct SimulationReport {
    pub name: String,
    pub gamma_t: f64,
    pub final_time: f64,
    pub steps: usize,
    pub step_size: f64,
    pub max_norm_drift: f64,
    /// Final populations against J²_|J−J0|(γt).
    pub oracle: ComparisonReport,
}

fn create(path: &Path) -> Result<BufWriter<File>, CliError> {
    Ok(BufWriter::new(File::create(path)?))
}

/// Infinite-lattice oracle restricted to the ladder, indexed by J.
pub fn ladder_oracle(resolved: &ResolvedRun) -> LatticeDistribution {
    let j0 = resolved.run.initial_j as i64;
    let j_max = resolved.rotor.j_max as i64;
    let range = j0.max(j_max - j0) as usize;
    let full = ctqw_distribution(resolved.gamma_t(), 1.0, range).shifted(j0);
    let (offsets, probabilities) = full.iter().filter(|(j, _)| (0..=j_max).contains(j)).unzip();
    LatticeDistribution { offsets, probabilities }
}

pub fn run_trajectory(resolved: &ResolvedRun) -> Result<Trajectory, CliError> {
    let start = WalkState::basis(
        resolved.rotor.ladder_size(),
        resolved.run.initial_j,
        resolved.run.t_start,
    )?;
    Ok(propagate(
        &start,
        &resolved.comb,
        &resolved.rotor,
        &resolved.run,
        resolved.distorted_rotor(),
    )?)
}

pub fn simulation_report(
    name: &str,
    resolved: &ResolvedRun,
    traj: &Trajectory,
) -> Result<SimulationReport, CliError> {
    let sim = ladder_distribution(traj.final_populations(), 0)?;
    let oracle = compare(&sim, &ladder_oracle(resolved))?;
    Ok(SimulationReport {
        name: name.to_string(),
        gamma_t: resolved.gamma_t(),
        final_time: traj.final_state().time,
        steps: traj.steps,
        step_size: traj.step_size,
        max_norm_drift: traj.max_norm_drift(),
        oracle,
    })
}

/// Writes `config.toml`, `trajectory.{csv,json}`, `oracle.csv` and
/// `report.json` under `out`.
pub fn simulate(
    cfg: &ExperimentConfig,
    out: &Path,
    format: Option<Format>,
) -> Result<SimulationReport, CliError> {
    cfg.validate()?;
    let resolved = cfg.resolve()?;
    let traj = run_trajectory(&resolved)?;
    let report = simulation_report(&cfg.name, &resolved, &traj)?;

    fs::create_dir_all(out)?;
    fs::write(out.join("config.toml"), cfg.to_toml())?;
    let formats = format.map_or_else(|| cfg.output.formats.clone(), |f| vec![f]);
    for f in formats {
        match f {
            Format::Csv => write_trajectory_csv(&traj, create(&out.join("trajectory.csv"))?)?,
            Format::Json => write_trajectory_json(&traj, create(&out.join("trajectory.json"))?)?,
        }
    }
    write_distribution_csv(&ladder_oracle(&resolved), create(&out.join("oracle.csv"))?)?;
    write_json(&report, &out.join("report.json"))?;
    Ok(report)
}

pub fn write_json<T: Serialize>(value: &T, path: &Path) -> Result<(), CliError> {
    let mut w = create(path)?;
    serde_json::to_writer_pretty(&mut w, value).map_err(|e| CliError::Runtime(e.into()))?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

#[derive(Debug, Clone, Copy, Default)]
pub struct ProfileWindow {
    pub t0: Option<f64>,
    pub t1: Option<f64>,
    pub samples: Option<usize>,
}

/// One `field_profile*.csv` per configured j_max. Returns the files written.
pub fn field_profile(
    cfg: &ExperimentConfig,
    window: ProfileWindow,
    out: &Path,
) -> Result<Vec<PathBuf>, CliError> {
    cfg.validate()?;
    let section = cfg.profile.clone();
    let t0 = window.t0.or(section.as_ref().map(|p| p.t0)).unwrap_or(-1.5);
    let t1 = window.t1.or(section.as_ref().map(|p| p.t1)).unwrap_or(1.5);
    let samples = window.samples.or(section.as_ref().map(|p| p.samples)).unwrap_or(3001);
    let j_list = section.map(|p| p.j_max).filter(|l| !l.is_empty());

    fs::create_dir_all(out)?;
    let mut written = Vec::new();
    let gamma = cfg.scaled_gamma(cfg.comb.gamma);
    let targets: Vec<(usize, PathBuf)> = match j_list {
        Some(list) => list
            .into_iter()
            .map(|j| (j, out.join(format!("field_profile_jmax{j}.csv"))))
            .collect(),
        None => vec![(cfg.rotor.j_max, out.join("field_profile.csv"))],
    };
    for (j_max, path) in targets {
        let rotor = cfg.build_rotor(cfg.rotor.d_over_b, j_max)?;
        let comb = build_comb(&rotor, gamma, cfg.comb.chirped)?;
        let profile = comb.sample_profile(cfg.scaled_time(t0), cfg.scaled_time(t1), samples)?;
        write_profile_csv(&profile, create(&path)?)?;
        written.push(path);
    }
    Ok(written)
}

pub fn oracle_distribution(
    kind: OracleKind,
    gamma: f64,
    t: f64,
    range: usize,
) -> Result<LatticeDistribution, CliError> {
    if !(t >= 0.0) {
        return Err(CliError::Config {
            field: "t".into(),
            message: format!("must be non-negative, got {t}"),
        });
    }
    Ok(match kind {
        OracleKind::Ctqw => ctqw_distribution(t, gamma, range),
        OracleKind::Classical => classical_distribution(t, gamma, range)?,
        OracleKind::Finite => {
            let state = ctqw_finite(2 * range + 1, range, t, gamma)?;
            ladder_distribution(&state.populations(), range)?
        }
    })
}

/// Writes `oracle_<kind>.csv` under `out`.
pub fn oracle(
    kind: OracleKind,
    gamma: f64,
    t: f64,
    range: usize,
    out: &Path,
) -> Result<PathBuf, CliError> {
    let dist = oracle_distribution(kind, gamma, t, range)?;
    fs::create_dir_all(out)?;
    let path = out.join(format!("oracle_{}.csv", kind.label()));
    write_distribution_csv(&dist, create(&path)?)?;
    Ok(path)
}

/// Compare two distribution (or trajectory) CSV files.
pub fn compare_files(simulated: &Path, reference: &Path) -> Result<ComparisonReport, CliError> {
    let a = read_distribution_csv(File::open(simulated)?)?;
    let b = read_distribution_csv(File::open(reference)?)?;
    Ok(compare(&a, &b)?)
}
