use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use combwalk_cli::commands::{self, ProfileWindow};
use combwalk_cli::config::{Format, OracleKind};
use combwalk_cli::sweep;
use combwalk_cli::{CliError, ExperimentConfig};

#[derive(Parser)]
#[command(name = "combwalk", version, about = "Comb-driven rotational quantum walk simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Integrate the driven ladder and compare with the Bessel solution.
    Simulate {
        /// Config file, or the name of a bundled preset.
        #[arg(long)]
        config: String,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Trajectory format; defaults to `output.formats` from the config.
        #[arg(long, value_enum)]
        format: Option<Format>,
    },
    /// Sample the comb field in time.
    FieldProfile {
        #[arg(long)]
        config: String,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, allow_hyphen_values = true)]
        t0: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        t1: Option<f64>,
        #[arg(long)]
        n: Option<usize>,
    },
    /// Write analytic walk distributions.
    Oracle {
        /// Use the `[oracle]` table of this config instead of the flags.
        #[arg(long)]
        config: Option<String>,
        #[arg(long, value_enum)]
        kind: Option<OracleKind>,
        #[arg(long, default_value_t = 1.0)]
        gamma: f64,
        #[arg(long, default_value_t = 0.0)]
        t: f64,
        /// Sites −range ..= range.
        #[arg(long, default_value_t = 100)]
        range: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare two distribution or trajectory CSV files.
    Compare {
        simulated: PathBuf,
        reference: PathBuf,
        /// Write report.json here instead of printing it.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the cross product of the config's `[sweep]` axes in parallel.
    Sweep {
        #[arg(long)]
        config: String,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = default_workers())]
        workers: usize,
    },
}

fn default_workers() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Simulate { config, out, format } => {
            let cfg = ExperimentConfig::load(&config)?;
            let dir = cfg.output_dir(out.as_deref());
            let report = commands::simulate(&cfg, &dir, format)?;
            println!(
                "{}: γt = {}, TV = {:.3e}, L∞ = {:.3e}, max norm drift = {:.2e} -> {}",
                report.name,
                report.gamma_t,
                report.oracle.total_variation,
                report.oracle.l_inf,
                report.max_norm_drift,
                dir.display()
            );
        }
        Command::FieldProfile { config, out, t0, t1, n } => {
            let cfg = ExperimentConfig::load(&config)?;
            let dir = cfg.output_dir(out.as_deref());
            let window = ProfileWindow { t0, t1, samples: n };
            for path in commands::field_profile(&cfg, window, &dir)? {
                println!("{}", path.display());
            }
        }
        Command::Oracle { config, kind, gamma, t, range, out } => {
            let dir = out.unwrap_or_else(|| PathBuf::from("runs/oracle"));
            let jobs = match config {
                Some(source) => {
                    let cfg = ExperimentConfig::load(&source)?;
                    cfg.validate()?;
                    let o = cfg.oracle.clone().ok_or_else(|| CliError::Config {
                        field: "oracle".into(),
                        message: "config has no [oracle] table".into(),
                    })?;
                    let kinds = kind.map_or(o.kinds, |k| vec![k]);
                    let g = cfg.scaled_gamma(o.gamma);
                    let time = cfg.scaled_time(o.t);
                    kinds.into_iter().map(|k| (k, g, time, o.range)).collect()
                }
                None => {
                    let k = kind.ok_or_else(|| CliError::Config {
                        field: "--kind".into(),
                        message: "required without --config".into(),
                    })?;
                    vec![(k, gamma, t, range)]
                }
            };
            for (k, g, time, r) in jobs {
                println!("{}", commands::oracle(k, g, time, r, &dir)?.display());
            }
        }
        Command::Compare { simulated, reference, out } => {
            let report = commands::compare_files(&simulated, &reference)?;
            match out {
                Some(dir) => {
                    std::fs::create_dir_all(&dir)?;
                    commands::write_json(&report, &dir.join("report.json"))?;
                }
                None => println!(
                    "{}",
                    serde_json::to_string_pretty(&report).expect("report serializes")
                ),
            }
        }
        Command::Sweep { config, out, workers } => {
            let cfg = ExperimentConfig::load(&config)?;
            let dir = cfg.output_dir(out.as_deref());
            let rows = sweep::sweep(&cfg, workers, &dir)?;
            print_table(&rows, &dir);
            let failed = sweep::failures(&rows);
            if failed > 0 {
                return Err(CliError::SweepFailures(failed));
            }
        }
    }
    Ok(())
}

fn print_table(rows: &[sweep::SweepRow], dir: &Path) {
    let f = |v: Option<f64>| v.map_or("-".to_string(), |x| format!("{x:.3e}"));
    println!(
        "{:>4} {:>8} {:>10} {:>7} {:>8} {:>10} {:>10} {:>10} {:>8} {:>8}",
        "cell", "gamma", "d_over_b", "chirped", "steps", "final_tv", "drift", "step_err", "ratio", "wall_s"
    );
    for r in rows {
        println!(
            "{:>4} {:>8} {:>10.3e} {:>7} {:>8} {:>10} {:>10} {:>10} {:>8} {:>8.2}{}",
            r.index,
            r.cell.gamma,
            r.cell.d_over_b,
            r.cell.chirped,
            r.steps.map_or("-".to_string(), |s| s.to_string()),
            f(r.final_tv),
            f(r.max_norm_drift),
            f(r.step_error),
            r.error_ratio.map_or("-".to_string(), |x| format!("{x:.2}")),
            r.wall_time_s,
            r.error.as_deref().map_or(String::new(), |e| format!("  FAILED: {e}")),
        );
    }
    println!("-> {}", dir.join("sweep.csv").display());
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
