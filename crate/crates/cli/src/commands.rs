//! `run`, `sweep` and `bounds`.
//!
//! Commands return their CSV text; writing files is left to the caller.

use tsbandit::bounds::{BoundKind, BoundSpec};
use tsbandit::simulator::{derive_seed, run_ensemble};
use tsbandit::{PolicyKind, RunConfig};

use crate::config::{ConfigError, DelaySpec, ExperimentConfig, InstanceSpec, SweepConfig};
use crate::output::{diagnostics_csv, fmt_f64, regret_csv, regret_rows, Table, BOUNDS_HEADER, REGRET_HEADER};

/// Largest grid a sweep will expand.
pub const MAX_SWEEP_CELLS: usize = 10_000;

#[derive(Debug, thiserror::Error)]
pub enum CommandError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("simulation failed: {0}")]
    Simulation(#[from] tsbandit::simulator::SimError),
    #[error(transparent)]
    Bound(#[from] tsbandit::bounds::BoundError),
    #[error("sweep grid has {cells} cells, more than the limit of {limit}")]
    GridTooLarge { cells: usize, limit: usize },
    #[error("sweep cell {cell} ({coords}): {message}")]
    InvalidCell {
        cell: usize,
        coords: String,
        message: String,
    },
    #[error("unknown bound kind {0:?}")]
    UnknownBoundKind(String),
}

pub struct RunOutput {
    pub regret_csv: String,
    pub diagnostics_csv: Option<String>,
    /// The config as actually run; parses back to an equal config.
    pub resolved_toml: String,
}

/// Runs one experiment. `source` is the config text, for line-anchored errors.
pub fn cmd_run(config: &ExperimentConfig, source: Option<&str>, workers: usize) -> Result<RunOutput, CommandError> {
    let resolved = config.resolve(source)?;
    let e = &config.experiment;
    let ensemble = run_ensemble(&resolved.run, &resolved.instance, e.runs, workers)?;
    Ok(RunOutput {
        regret_csv: regret_csv(&e.id, e.policy.name(), e.seed, &ensemble.summary),
        diagnostics_csv: ensemble.diagnostics.as_ref().map(|d| diagnostics_csv(&e.id, d)),
        resolved_toml: config.to_toml(),
    })
}

/// One point of a sweep grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepCell {
    pub index: usize,
    pub policy: PolicyKind,
    pub delay: DelaySpec,
    pub horizon: u64,
    pub gap: Option<f64>,
}

impl SweepCell {
    pub fn coords(&self) -> String {
        let mut s = format!("policy={};delay={};T={}", self.policy, self.delay, self.horizon);
        if let Some(g) = self.gap {
            s.push_str(&format!(";gap={}", fmt_f64(g)));
        }
        s
    }
}

/// Expands the grid in the order policy, delay, horizon, gap (last varies
/// fastest) and validates every cell before anything runs.
pub fn expand_grid(sweep: &SweepConfig) -> Result<Vec<SweepCell>, CommandError> {
    let g = &sweep.grid;
    let policies = if g.policies.is_empty() {
        vec![sweep.experiment.policy]
    } else {
        g.policies
            .iter()
            .map(|p| crate::config::parse_policy(p))
            .collect::<Result<_, _>>()?
    };
    let delays = if g.delays.is_empty() {
        vec![sweep.delay]
    } else {
        g.delays.clone()
    };
    let horizons = if g.horizons.is_empty() {
        vec![sweep.experiment.horizon]
    } else {
        g.horizons.clone()
    };
    let gaps: Vec<Option<f64>> = if g.gaps.is_empty() {
        vec![None]
    } else {
        g.gaps.iter().map(|&x| Some(x)).collect()
    };

    let cells = [policies.len(), delays.len(), horizons.len(), gaps.len()]
        .iter()
        .try_fold(1usize, |acc, &n| acc.checked_mul(n))
        .unwrap_or(usize::MAX);
    if cells > MAX_SWEEP_CELLS {
        return Err(CommandError::GridTooLarge {
            cells,
            limit: MAX_SWEEP_CELLS,
        });
    }
    if gaps[0].is_none() && sweep.instance.is_none() {
        return Err(ConfigError::Unanchored("sweep needs either [instance] or grid.gaps".into()).into());
    }

    let mut out = Vec::with_capacity(cells);
    for &policy in &policies {
        for &delay in &delays {
            for &horizon in &horizons {
                for &gap in &gaps {
                    let cell = SweepCell {
                        index: out.len(),
                        policy,
                        delay,
                        horizon,
                        gap,
                    };
                    // Building the cell's experiment runs every validation.
                    cell_experiment(sweep, &cell)?
                        .resolve(None)
                        .map_err(|e| CommandError::InvalidCell {
                            cell: cell.index,
                            coords: cell.coords(),
                            message: e.to_string(),
                        })?;
                    out.push(cell);
                }
            }
        }
    }
    Ok(out)
}

/// The single experiment a cell stands for.
fn cell_experiment(sweep: &SweepConfig, cell: &SweepCell) -> Result<ExperimentConfig, CommandError> {
    let instance = match cell.gap {
        Some(gap) => {
            let best = sweep.grid.best_mean;
            if !(gap > 0.0 && gap <= 1.0 && (0.0..=1.0).contains(&best) && best - gap >= 0.0) {
                return Err(CommandError::InvalidCell {
                    cell: cell.index,
                    coords: cell.coords(),
                    message: format!("gap {gap} needs 0 < gap <= best_mean = {best}"),
                });
            }
            InstanceSpec::bernoulli(&[best, best - gap], true)
        }
        None => sweep.instance.clone().expect("checked before expansion"),
    };
    let mut experiment = sweep.experiment.clone();
    experiment.id = format!("{}[{}]", sweep.experiment.id, cell.coords());
    experiment.policy = cell.policy;
    experiment.horizon = cell.horizon;
    experiment.seed = derive_seed(sweep.experiment.seed, cell.index as u64);
    // Base checkpoints that fit, always ending at the cell's horizon.
    experiment.checkpoints.retain(|&t| t < cell.horizon);
    experiment.checkpoints.push(cell.horizon);
    experiment.output = None;
    Ok(ExperimentConfig {
        experiment,
        delay: cell.delay,
        instance,
    })
}

/// Runs every cell of the grid and concatenates their regret rows.
pub fn cmd_sweep(sweep: &SweepConfig, workers: usize) -> Result<String, CommandError> {
    let cells = expand_grid(sweep)?;
    let mut table = Table::new(&REGRET_HEADER);
    for cell in &cells {
        let cfg = cell_experiment(sweep, cell)?;
        let resolved = cfg.resolve(None)?;
        let run: RunConfig = resolved.run;
        let ensemble = run_ensemble(&run, &resolved.instance, cfg.experiment.runs, workers)?;
        let e = &cfg.experiment;
        regret_rows(&mut table, &e.id, e.policy.name(), e.seed, &ensemble.summary);
    }
    Ok(table.finish())
}

/// One row per `(kind, T)`, kinds in the order given.
pub fn cmd_bounds(
    means: &[f64],
    horizons: &[f64],
    kinds: &[String],
    constant: Option<f64>,
) -> Result<String, CommandError> {
    let kinds: Vec<BoundKind> = kinds
        .iter()
        .map(|k| k.parse().map_err(|_| CommandError::UnknownBoundKind(k.clone())))
        .collect::<Result<_, _>>()?;
    let mut table = Table::new(&BOUNDS_HEADER);
    for kind in kinds {
        let mut spec = BoundSpec::new(kind, means.to_vec());
        spec.constant = constant;
        let curve = spec.curve(horizons)?;
        for (t, v) in curve.points {
            table.row([kind.name().to_string(), fmt_f64(t), fmt_f64(v), curve.label.to_string()]);
        }
    }
    Ok(table.finish())
}
