use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use tsbandit_cli::config::{BoundsConfig, ExperimentConfig, SweepConfig};
use tsbandit_cli::verify::{all_passed, report_csv, run_suite, Budget, Status, Suite, VerifyOptions};
use tsbandit_cli::{cmd_bounds, cmd_run, cmd_sweep};

#[derive(Parser)]
#[command(name = "tsbandit", version, about = "Thompson Sampling bandit experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Output file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads. Results do not depend on this.
    #[arg(long, default_value_t = 1)]
    workers: usize,
    /// Base seed, overriding the config.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// Run one experiment and write its regret curve.
    Run {
        #[arg(long)]
        config: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Run every cell of a parameter grid.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Evaluate bound curves.
    Bounds {
        /// TOML with [instance] and [bounds]; replaces the flags below.
        #[arg(long, conflicts_with_all = ["means", "horizons", "kinds"])]
        config: Option<PathBuf>,
        /// Arm means, comma separated.
        #[arg(long, value_delimiter = ',')]
        means: Vec<f64>,
        /// Horizons, comma separated.
        #[arg(long, value_delimiter = ',')]
        horizons: Vec<f64>,
        /// Bound kinds, comma separated; empty gives a header-only file.
        #[arg(long, value_delimiter = ',')]
        kinds: Vec<String>,
        /// Constant of the shape-only curve.
        #[arg(long)]
        constant: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a verification suite: identities, samplers, lemmas, regret or all.
    Verify {
        #[arg(default_value = "all")]
        suite: Suite,
        #[arg(long, default_value = "smoke")]
        budget: Budget,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Debug)]
enum Failure {
    /// Bad input or an I/O problem.
    Error(String),
    /// Everything ran but a verification check failed.
    ChecksFailed,
}

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Error(e.to_string())
    }
}

fn emit(path: Option<&Path>, text: &str) -> Result<(), Failure> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| Failure::Error(format!("cannot write {}: {e}", p.display()))),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| Failure::Error(format!("cannot write to stdout: {e}"))),
    }
}

/// `dir/name.csv` → `dir/name.<suffix>`.
fn sibling(path: &Path, suffix: &str) -> PathBuf {
    let stem = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    path.with_file_name(format!("{stem}.{suffix}"))
}

fn with_source<T>(path: &Path, parsed: Result<T, tsbandit_cli::ConfigError>) -> Result<T, Failure> {
    parsed.map_err(|e| Failure::Error(format!("{}: {e}", path.display())))
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Run { config, common } => {
            let (mut cfg, source) = with_source(&config, ExperimentConfig::load(&config))?;
            if let Some(seed) = common.seed {
                cfg.experiment.seed = seed;
            }
            let out = common.out.or_else(|| cfg.experiment.output.clone());
            if cfg.experiment.diagnostics && out.is_none() {
                return Err(Failure::Error(
                    "diagnostics need an output path (--out or experiment.output)".into(),
                ));
            }
            let result = cmd_run(&cfg, Some(&source), common.workers)
                .map_err(|e| Failure::Error(format!("{}: {e}", config.display())))?;
            emit(out.as_deref(), &result.regret_csv)?;
            if let Some(path) = &out {
                emit(Some(&sibling(path, "resolved.toml")), &result.resolved_toml)?;
                if let Some(diag) = &result.diagnostics_csv {
                    emit(Some(&sibling(path, "diagnostics.csv")), diag)?;
                }
                eprintln!("wrote {}", path.display());
            }
        }
        Command::Sweep { config, common } => {
            let (mut cfg, _) = with_source(&config, SweepConfig::load(&config))?;
            if let Some(seed) = common.seed {
                cfg.experiment.seed = seed;
            }
            let csv = cmd_sweep(&cfg, common.workers)?;
            emit(common.out.as_deref(), &csv)?;
        }
        Command::Bounds {
            config,
            means,
            horizons,
            kinds,
            constant,
            out,
        } => {
            let csv = match config {
                Some(path) => {
                    let cfg = with_source(&path, BoundsConfig::load(&path))?;
                    let instance = with_source(&path, cfg.instance.build(None))?;
                    cmd_bounds(
                        &instance.means(),
                        &cfg.bounds.horizons,
                        &cfg.bounds.kinds,
                        cfg.bounds.constant,
                    )?
                }
                None => {
                    // `--kinds ""` means an empty list.
                    let kinds: Vec<String> = kinds.into_iter().filter(|k| !k.is_empty()).collect();
                    cmd_bounds(&means, &horizons, &kinds, constant)?
                }
            };
            emit(out.as_deref(), &csv)?;
        }
        Command::Verify { suite, budget, common } => {
            let mut opts = VerifyOptions {
                budget,
                workers: common.workers,
                ..VerifyOptions::default()
            };
            if let Some(seed) = common.seed {
                opts.seed = seed;
            }
            let results = run_suite(suite, &opts);
            emit(common.out.as_deref(), &report_csv(&results))?;
            let count = |s: Status| results.iter().filter(|r| r.status == s).count();
            eprintln!(
                "{} checks: {} passed, {} failed, {} skipped",
                results.len(),
                count(Status::Pass),
                count(Status::Fail),
                count(Status::SkippedBudget)
            );
            for r in results.iter().filter(|r| r.status == Status::Fail) {
                eprintln!("FAIL {}: observed {} vs threshold {}", r.name, r.observed, r.threshold);
            }
            if !all_passed(&results) {
                return Err(Failure::ChecksFailed);
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::ChecksFailed) => ExitCode::from(1),
        Err(Failure::Error(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
