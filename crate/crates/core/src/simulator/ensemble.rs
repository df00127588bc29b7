use rayon::prelude::*;

use crate::bandit::BanditInstance;

use super::{run_single, saturation_thresholds, RunConfig, SimError, Trace};

/// SplitMix64 finalizer.
pub fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of run `index` in an ensemble with `base` seed.
pub fn derive_seed(base: u64, index: u64) -> u64 {
    splitmix64(base ^ splitmix64(index))
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckpointSummary {
    pub t: u64,
    pub mean_regret: f64,
    /// Sample standard deviation over `sqrt(runs)`; `None` for a single run.
    pub stderr: Option<f64>,
    pub mean_plays: Vec<f64>,
    pub plays_stderr: Vec<Option<f64>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RegretSummary {
    pub runs: usize,
    pub base_seed: u64,
    pub checkpoints: Vec<CheckpointSummary>,
}

impl RegretSummary {
    pub fn at(&self, t: u64) -> Option<&CheckpointSummary> {
        self.checkpoints.iter().find(|c| c.t == t)
    }

    pub fn last(&self) -> &CheckpointSummary {
        self.checkpoints.last().expect("at least one checkpoint")
    }
}

/// Diagnostics pooled over an ensemble.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagnosticsSummary {
    pub runs: usize,
    pub horizon: u64,
    pub saturation_threshold: Vec<Option<u64>>,
    /// Runs in which each arm became saturated.
    pub saturated_runs: Vec<u64>,
    /// Mean saturation step over the runs that reached it.
    pub mean_saturation_time: Vec<Option<f64>>,
    /// Runs violating E₂ at each step (index `t − 1`).
    pub e2_violations_per_step: Option<Vec<u64>>,
    /// Runs violating E at each step (index `t − 1`).
    pub e_violations_per_step: Option<Vec<u64>>,
    /// Mean of the uncensored inter-play gaps of the optimal arm.
    pub mean_optimal_gap: Option<f64>,
    pub optimal_gap_count: u64,
}

impl DiagnosticsSummary {
    /// Largest per-step violation frequency of E₂.
    pub fn max_e2_frequency(&self) -> Option<f64> {
        self.e2_violations_per_step
            .as_ref()
            .map(|v| max_frequency(v, self.runs))
    }

    pub fn max_e_frequency(&self) -> Option<f64> {
        self.e_violations_per_step.as_ref().map(|v| max_frequency(v, self.runs))
    }
}

fn max_frequency(counts: &[u64], runs: usize) -> f64 {
    counts.iter().copied().max().unwrap_or(0) as f64 / runs as f64
}

#[derive(Debug, Clone, PartialEq)]
pub struct Ensemble {
    pub summary: RegretSummary,
    pub diagnostics: Option<DiagnosticsSummary>,
}

/// What an ensemble keeps from one run.
struct RunOutcome {
    regret: Vec<f64>,
    plays: Vec<Vec<u64>>,
    diagnostics: Option<RunDiagnostics>,
}

struct RunDiagnostics {
    saturation_time: Vec<Option<u64>>,
    e2_steps: Option<Vec<u64>>,
    e_steps: Option<Vec<u64>>,
    gap_sum: u64,
    gap_count: u64,
}

impl From<Trace> for RunOutcome {
    fn from(trace: Trace) -> Self {
        let diagnostics = trace.diagnostics.map(|d| {
            // Drop the trailing censored gap.
            let complete = &d.optimal_gaps[..d.optimal_gaps.len().saturating_sub(1)];
            RunDiagnostics {
                saturation_time: d.saturation_time,
                e2_steps: d.e2_violation_steps,
                e_steps: d.e_violation_steps,
                gap_sum: complete.iter().sum(),
                gap_count: complete.len() as u64,
            }
        });
        let (regret, plays) = trace.checkpoints.into_iter().map(|c| (c.regret, c.plays)).unzip();
        RunOutcome {
            regret,
            plays,
            diagnostics,
        }
    }
}

fn mean_and_stderr(values: impl Iterator<Item = f64> + Clone, n: usize) -> (f64, Option<f64>) {
    let mean = values.clone().sum::<f64>() / n as f64;
    if n < 2 {
        return (mean, None);
    }
    let var = values.map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1) as f64;
    (mean, Some((var / n as f64).sqrt()))
}

/// Runs `runs` independent replications on a pool of `workers` threads.
///
/// Run `i` uses seed [`derive_seed`]`(config.seed, i)`. Outcomes land in
/// indexed slots and are reduced in index order, so the result is identical
/// for every worker count.
pub fn run_ensemble(
    config: &RunConfig,
    instance: &BanditInstance,
    runs: usize,
    workers: usize,
) -> Result<Ensemble, SimError> {
    config.validate()?;
    if runs == 0 {
        return Err(SimError::Config("runs must be >= 1".into()));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| SimError::Pool(e.to_string()))?;
    let outcomes: Vec<RunOutcome> = pool.install(|| {
        (0..runs)
            .into_par_iter()
            .map(|i| {
                let mut cfg = config.clone();
                cfg.seed = derive_seed(config.seed, i as u64);
                run_single(&cfg, instance).map(RunOutcome::from)
            })
            .collect::<Result<_, _>>()
    })?;

    let checkpoints = config.checkpoints();
    let arms = instance.len();
    let summary = RegretSummary {
        runs,
        base_seed: config.seed,
        checkpoints: checkpoints
            .iter()
            .enumerate()
            .map(|(c, &t)| {
                let (mean_regret, stderr) = mean_and_stderr(outcomes.iter().map(|o| o.regret[c]), runs);
                let (mean_plays, plays_stderr) = (0..arms)
                    .map(|a| mean_and_stderr(outcomes.iter().map(|o| o.plays[c][a] as f64), runs))
                    .unzip();
                CheckpointSummary {
                    t,
                    mean_regret,
                    stderr,
                    mean_plays,
                    plays_stderr,
                }
            })
            .collect(),
    };

    let diagnostics = config
        .diagnostics
        .then(|| summarize_diagnostics(&outcomes, instance, config.horizon));
    Ok(Ensemble { summary, diagnostics })
}

fn summarize_diagnostics(outcomes: &[RunOutcome], instance: &BanditInstance, horizon: u64) -> DiagnosticsSummary {
    let arms = instance.len();
    let diags: Vec<&RunDiagnostics> = outcomes.iter().filter_map(|o| o.diagnostics.as_ref()).collect();
    let mut saturated_runs = vec![0u64; arms];
    let mut saturation_sum = vec![0u64; arms];
    let per_step = |select: fn(&RunDiagnostics) -> Option<&Vec<u64>>| {
        // Recorded for every run or for none.
        select(diags.first()?)?;
        let mut counts = vec![0u64; horizon as usize];
        for d in &diags {
            for &t in select(d).into_iter().flatten() {
                counts[(t - 1) as usize] += 1;
            }
        }
        Some(counts)
    };
    for d in &diags {
        for (a, s) in d.saturation_time.iter().enumerate() {
            if let Some(t) = s {
                saturated_runs[a] += 1;
                saturation_sum[a] += t;
            }
        }
    }
    let gap_sum: u64 = diags.iter().map(|d| d.gap_sum).sum();
    let gap_count: u64 = diags.iter().map(|d| d.gap_count).sum();
    DiagnosticsSummary {
        runs: diags.len(),
        horizon,
        saturation_threshold: saturation_thresholds(instance, horizon),
        mean_saturation_time: saturated_runs
            .iter()
            .zip(&saturation_sum)
            .map(|(&n, &s)| (n > 0).then(|| s as f64 / n as f64))
            .collect(),
        saturated_runs,
        e2_violations_per_step: per_step(|d| d.e2_steps.as_ref()),
        e_violations_per_step: per_step(|d| d.e_steps.as_ref()),
        mean_optimal_gap: (gap_count > 0).then(|| gap_sum as f64 / gap_count as f64),
        optimal_gap_count: gap_count,
    }
}

/// Mean pseudo-regret and standard error per checkpoint over `runs` runs.
pub fn run_monte_carlo(
    config: &RunConfig,
    instance: &BanditInstance,
    runs: usize,
    workers: usize,
) -> Result<RegretSummary, SimError> {
    run_ensemble(config, instance, runs, workers).map(|e| e.summary)
}
