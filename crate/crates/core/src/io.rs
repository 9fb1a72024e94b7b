//! Versioned CSV and JSON output.
//!
//! Every CSV starts with a `# combwalk <kind> v<N>` comment line followed by
//! a column header. Floats use Rust's shortest round-trip formatting, so
//! identical inputs give byte-identical files.

use std::io::{BufRead, BufReader, Read, Write};

use serde::Serialize;

use crate::comb::FieldProfile;
use crate::dynamics::Trajectory;
use crate::error::{domain, Result};
use crate::oracles::LatticeDistribution;

pub const FORMAT_VERSION: u32 = 1;

pub const TRAJECTORY_COLUMNS: [&str; 5] = ["snapshot_t", "J", "re_c", "im_c", "population"];
pub const PROFILE_COLUMNS: [&str; 2] = ["t", "epsilon"];
pub const DISTRIBUTION_COLUMNS: [&str; 2] = ["n", "probability"];

/// Plain decimal for moderate magnitudes, exponent form otherwise; both are
/// shortest round-trip representations.
pub fn fmt_f64(v: f64) -> String {
    let a = v.abs();
    if a == 0.0 || (1e-4..1e15).contains(&a) || !v.is_finite() {
        format!("{v}")
    } else {
        format!("{v:e}")
    }
}

fn banner(kind: &str) -> String {
    format!("# combwalk {kind} v{FORMAT_VERSION}")
}

fn csv_writer<W: Write>(mut w: W, kind: &str, columns: &[&str]) -> Result<csv::Writer<W>> {
    writeln!(w, "{}", banner(kind))?;
    let mut out = csv::Writer::from_writer(w);
    out.write_record(columns)?;
    Ok(out)
}

pub fn write_trajectory_csv<W: Write>(traj: &Trajectory, w: W) -> Result<()> {
    let mut out = csv_writer(w, "trajectory", &TRAJECTORY_COLUMNS)?;
    for state in &traj.snapshots {
        let t = fmt_f64(state.time);
        for (j, c) in state.amplitudes.iter().enumerate() {
            out.write_record([
                t.as_str(),
                &j.to_string(),
                &fmt_f64(c.re),
                &fmt_f64(c.im),
                &fmt_f64(c.norm_sqr()),
            ])?;
        }
    }
    out.flush()?;
    Ok(())
}

#[derive(Serialize)]
struct TrajectoryJson<'a> {
    format: &'static str,
    version: u32,
    step_size: f64,
    steps: usize,
    snapshots: Vec<SnapshotJson<'a>>,
}

#[derive(Serialize)]
struct SnapshotJson<'a> {
    t: f64,
    norm_drift: f64,
    amplitudes: Vec<[f64; 2]>,
    populations: &'a [f64],
}

pub fn write_trajectory_json<W: Write>(traj: &Trajectory, w: W) -> Result<()> {
    let doc = TrajectoryJson {
        format: "combwalk-trajectory",
        version: FORMAT_VERSION,
        step_size: traj.step_size,
        steps: traj.steps,
        snapshots: traj
            .snapshots
            .iter()
            .zip(&traj.populations)
            .zip(&traj.norm_drift)
            .map(|((s, p), d)| SnapshotJson {
                t: s.time,
                norm_drift: *d,
                amplitudes: s.amplitudes.iter().map(|c| [c.re, c.im]).collect(),
                populations: p,
            })
            .collect(),
    };
    serde_json::to_writer_pretty(w, &doc)?;
    Ok(())
}

pub fn write_profile_csv<W: Write>(profile: &FieldProfile, w: W) -> Result<()> {
    let mut out = csv_writer(w, "field-profile", &PROFILE_COLUMNS)?;
    for (t, v) in profile.times.iter().zip(&profile.values) {
        out.write_record([fmt_f64(*t), fmt_f64(*v)])?;
    }
    out.flush()?;
    Ok(())
}

pub fn write_distribution_csv<W: Write>(dist: &LatticeDistribution, w: W) -> Result<()> {
    let mut out = csv_writer(w, "distribution", &DISTRIBUTION_COLUMNS)?;
    for (n, p) in dist.iter() {
        out.write_record([n.to_string(), fmt_f64(p)])?;
    }
    out.flush()?;
    Ok(())
}

/// Read a distribution CSV, or the final snapshot of a trajectory CSV
/// (indexed by J).
pub fn read_distribution_csv<R: Read>(r: R) -> Result<LatticeDistribution> {
    let mut reader = BufReader::new(r);
    let mut first = String::new();
    reader.read_line(&mut first)?;
    let kind = first.trim();
    let is_trajectory = kind == banner("trajectory");
    if !is_trajectory && kind != banner("distribution") {
        return domain(format!("unrecognized file banner {kind:?}"));
    }
    let mut rows = csv::Reader::from_reader(reader);
    if is_trajectory {
        let mut last_t: Option<String> = None;
        let mut offsets = Vec::new();
        let mut probs = Vec::new();
        for rec in rows.records() {
            let rec = rec?;
            if last_t.as_deref() != Some(&rec[0]) {
                last_t = Some(rec[0].to_string());
                offsets.clear();
                probs.clear();
            }
            offsets.push(parse::<i64>(&rec[1])?);
            probs.push(parse::<f64>(&rec[4])?);
        }
        LatticeDistribution::new(offsets, probs)
    } else {
        let mut offsets = Vec::new();
        let mut probs = Vec::new();
        for rec in rows.records() {
            let rec = rec?;
            offsets.push(parse::<i64>(&rec[0])?);
            probs.push(parse::<f64>(&rec[1])?);
        }
        LatticeDistribution::new(offsets, probs)
    }
}

fn parse<T: std::str::FromStr>(s: &str) -> Result<T> {
    s.trim()
        .parse()
        .or_else(|_| domain(format!("cannot parse {s:?}")))
}
