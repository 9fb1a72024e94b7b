//! Parallel parameter sweeps over the cross product of the configured axes.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::Path;
use std::time::Instant;

use combwalk::io::fmt_f64;
use combwalk::metrics::ladder_distribution;
use combwalk::{compare, Trajectory};
use rayon::prelude::*;
use serde::Serialize;

use crate::commands::{ladder_oracle, run_trajectory};
use crate::config::ExperimentConfig;
use crate::error::CliError;

/// The reference for step-error columns uses this multiple of the finest
/// swept resolution.
pub const REFERENCE_REFINEMENT: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Cell {
    pub gamma: f64,
    pub d_over_b: f64,
    pub chirped: bool,
    pub steps_per_unit_time: Option<usize>,
}

impl Cell {
    fn group_key(&self) -> (u64, u64, bool) {
        (self.gamma.to_bits(), self.d_over_b.to_bits(), self.chirped)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepRow {
    pub index: usize,
    pub cell: Cell,
    pub steps: Option<usize>,
    pub final_tv: Option<f64>,
    pub max_norm_drift: Option<f64>,
    /// Max |c_J − c_J(reference)| at the final time.
    pub step_error: Option<f64>,
    /// step_error of the next coarser resolution divided by this one.
    pub error_ratio: Option<f64>,
    pub wall_time_s: f64,
    pub error: Option<String>,
}

pub fn cells(cfg: &ExperimentConfig) -> Vec<Cell> {
    let axes = cfg.sweep.clone().unwrap_or_default();
    let or = |v: Vec<f64>, d: f64| if v.is_empty() { vec![d] } else { v };
    let gammas = or(axes.gamma, cfg.comb.gamma);
    let ds = or(axes.d_over_b, cfg.rotor.d_over_b);
    let chirps = if axes.chirped.is_empty() { vec![cfg.comb.chirped] } else { axes.chirped };
    let steps: Vec<Option<usize>> = if axes.steps_per_unit_time.is_empty() {
        vec![cfg.run.steps_per_unit_time]
    } else {
        axes.steps_per_unit_time.into_iter().map(Some).collect()
    };
    let mut out = Vec::new();
    for &gamma in &gammas {
        for &d_over_b in &ds {
            for &chirped in &chirps {
                for &s in &steps {
                    out.push(Cell {
                        gamma,
                        d_over_b,
                        chirped,
                        steps_per_unit_time: s,
                    });
                }
            }
        }
    }
    out
}

struct Outcome {
    steps: usize,
    final_tv: f64,
    traj: Trajectory,
}

fn run_cell(cfg: &ExperimentConfig, cell: &Cell) -> Result<Outcome, CliError> {
    let resolved = cfg.resolve_with(cell.gamma, cell.d_over_b, cell.chirped, cell.steps_per_unit_time)?;
    let traj = run_trajectory(&resolved)?;
    let sim = ladder_distribution(traj.final_populations(), 0)?;
    let final_tv = compare(&sim, &ladder_oracle(&resolved))?.total_variation;
    Ok(Outcome {
        steps: resolved.run.steps_per_unit_time,
        final_tv,
        traj,
    })
}

fn max_amplitude_error(a: &Trajectory, b: &Trajectory) -> f64 {
    a.final_state()
        .amplitudes
        .iter()
        .zip(&b.final_state().amplitudes)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// Run every cell on a pool of `workers` threads. Rows come back in
/// cross-product order whatever the completion order.
pub fn run_sweep(cfg: &ExperimentConfig, workers: usize) -> Result<Vec<SweepRow>, CliError> {
    cfg.validate()?;
    if cfg.sweep.as_ref().is_none_or(|s| s.is_empty()) {
        return Err(CliError::Config {
            field: "sweep".into(),
            message: "at least one sweep axis is required".into(),
        });
    }
    let cells = cells(cfg);
    let step_axis = cfg.sweep.as_ref().map_or(0, |s| s.steps_per_unit_time.len());

    // Reference runs, one per group of non-step parameters.
    let mut references: BTreeMap<(u64, u64, bool), Cell> = BTreeMap::new();
    if step_axis >= 2 {
        let finest = cfg.sweep.as_ref().unwrap().steps_per_unit_time.iter().copied().max().unwrap();
        for c in &cells {
            references.entry(c.group_key()).or_insert(Cell {
                steps_per_unit_time: Some(finest * REFERENCE_REFINEMENT),
                ..*c
            });
        }
    }

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| CliError::Config {
            field: "--workers".into(),
            message: e.to_string(),
        })?;

    let jobs: Vec<Cell> = cells.iter().chain(references.values()).copied().collect();
    let mut results: Vec<(usize, Result<Outcome, CliError>, f64)> = pool.install(|| {
        jobs.par_iter()
            .enumerate()
            .map(|(i, cell)| {
                let started = Instant::now();
                let r = run_cell(cfg, cell);
                (i, r, started.elapsed().as_secs_f64())
            })
            .collect()
    });
    results.sort_by_key(|(i, _, _)| *i);
    let ref_results = results.split_off(cells.len());
    let reference_by_key: BTreeMap<_, _> = references
        .keys()
        .zip(ref_results.iter())
        .filter_map(|(k, (_, r, _))| r.as_ref().ok().map(|o| (*k, &o.traj)))
        .collect();

    let mut rows: Vec<SweepRow> = results
        .iter()
        .map(|(index, result, wall)| {
            let cell = cells[*index];
            match result {
                Ok(o) => SweepRow {
                    index: *index,
                    cell,
                    steps: Some(o.steps),
                    final_tv: Some(o.final_tv),
                    max_norm_drift: Some(o.traj.max_norm_drift()),
                    step_error: reference_by_key
                        .get(&cell.group_key())
                        .map(|r| max_amplitude_error(&o.traj, r)),
                    error_ratio: None,
                    wall_time_s: *wall,
                    error: None,
                },
                Err(e) => SweepRow {
                    index: *index,
                    cell,
                    steps: None,
                    final_tv: None,
                    max_norm_drift: None,
                    step_error: None,
                    error_ratio: None,
                    wall_time_s: *wall,
                    error: Some(e.to_string()),
                },
            }
        })
        .collect();

    // Error ratios between consecutive resolutions within each group.
    let mut groups: BTreeMap<(u64, u64, bool), Vec<usize>> = BTreeMap::new();
    for (i, row) in rows.iter().enumerate() {
        groups.entry(row.cell.group_key()).or_default().push(i);
    }
    for members in groups.values_mut() {
        members.sort_by_key(|&i| rows[i].steps.unwrap_or(0));
        for w in members.windows(2) {
            if let (Some(coarse), Some(fine)) = (rows[w[0]].step_error, rows[w[1]].step_error) {
                if fine > 0.0 {
                    rows[w[1]].error_ratio = Some(coarse / fine);
                }
            }
        }
    }
    Ok(rows)
}

fn opt(v: Option<f64>) -> String {
    v.map(fmt_f64).unwrap_or_default()
}

/// Deterministic table; wall times are written separately.
pub fn write_sweep_csv<W: Write>(rows: &[SweepRow], mut w: W) -> std::io::Result<()> {
    writeln!(w, "# combwalk sweep v{}", combwalk::io::FORMAT_VERSION)?;
    writeln!(
        w,
        "cell,gamma,d_over_b,chirped,steps_per_unit_time,final_tv,max_norm_drift,step_error,error_ratio,status"
    )?;
    for r in rows {
        writeln!(
            w,
            "{},{},{},{},{},{},{},{},{},{}",
            r.index,
            fmt_f64(r.cell.gamma),
            fmt_f64(r.cell.d_over_b),
            r.cell.chirped,
            r.steps.map(|s| s.to_string()).unwrap_or_default(),
            opt(r.final_tv),
            opt(r.max_norm_drift),
            opt(r.step_error),
            opt(r.error_ratio),
            r.error.as_deref().map_or("ok".to_string(), |e| format!("\"failed: {}\"", e.replace('"', "'"))),
        )?;
    }
    Ok(())
}

pub fn write_timing_csv<W: Write>(rows: &[SweepRow], mut w: W) -> std::io::Result<()> {
    writeln!(w, "cell,wall_time_s")?;
    for r in rows {
        writeln!(w, "{},{:.3}", r.index, r.wall_time_s)?;
    }
    Ok(())
}

/// Run, write `sweep.csv` and `sweep_timing.csv`, and fail if any cell did.
pub fn sweep(cfg: &ExperimentConfig, workers: usize, out: &Path) -> Result<Vec<SweepRow>, CliError> {
    let rows = run_sweep(cfg, workers)?;
    fs::create_dir_all(out)?;
    fs::write(out.join("config.toml"), cfg.to_toml())?;
    let mut buf = Vec::new();
    write_sweep_csv(&rows, &mut buf)?;
    fs::write(out.join("sweep.csv"), buf)?;
    let mut buf = Vec::new();
    write_timing_csv(&rows, &mut buf)?;
    fs::write(out.join("sweep_timing.csv"), buf)?;
    Ok(rows)
}

pub fn failures(rows: &[SweepRow]) -> usize {
    rows.iter().filter(|r| r.error.is_some()).count()
}
