//! Verification suites behind `tsbandit verify`.
//!
//! Each check reports an observed statistic and the threshold it is held to.
//! Monte Carlo checks scale with the budget; a check whose smallest meaningful
//! size exceeds the smoke budget is reported as skipped, never as failed.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tsbandit::bandit::{binarize, BanditInstance, PosteriorState};
use tsbandit::bounds::{eq1_play_count_bound, thm1_bound, thm2_bound};
use tsbandit::numerics::ks::{ks_critical_value, ks_statistic, ks_two_sample, ks_two_sample_critical_value};
use tsbandit::numerics::{
    beta_cdf, beta_cdf_oracle, binomial_cdf, binomial_cdf_continued_fraction, binomial_cdf_summation, binomial_median,
    chernoff_tail_bound, exact_tail, expected_interplay_gap, kl_bernoulli, lemma3_envelope, sample_beta,
    sample_beta_order_statistic, sample_threshold_trials, BetaParams, BinomialParams, TailBoundQuery, TailSide,
};
use tsbandit::policies::ts_select;
use tsbandit::simulator::{derive_seed, run_ensemble, CheckpointSummary, Ensemble, SimError};
use tsbandit::{DelayModel, PolicyKind, RunConfig};

use crate::output::{fmt_f64, Table, VERIFY_HEADER};

/// Significance level of every distributional test.
const SIGNIFICANCE: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Identities,
    Samplers,
    Lemmas,
    Regret,
    All,
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "identities" => Suite::Identities,
            "samplers" => Suite::Samplers,
            "lemmas" => Suite::Lemmas,
            "regret" => Suite::Regret,
            "all" => Suite::All,
            other => {
                return Err(format!(
                    "unknown suite {other:?}; expected identities, samplers, lemmas, regret or all"
                ))
            }
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Budget {
    #[default]
    Smoke,
    Full,
}

impl FromStr for Budget {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "smoke" => Ok(Budget::Smoke),
            "full" => Ok(Budget::Full),
            other => Err(format!("unknown budget {other:?}; expected smoke or full")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    SkippedBudget,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::SkippedBudget => "skipped(budget)",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckResult {
    pub name: String,
    pub status: Status,
    pub observed: f64,
    pub threshold: f64,
}

impl CheckResult {
    /// Passes when `observed ≤ threshold`.
    fn at_most(name: impl Into<String>, observed: f64, threshold: f64) -> Self {
        Self {
            name: name.into(),
            status: if observed <= threshold {
                Status::Pass
            } else {
                Status::Fail
            },
            observed,
            threshold,
        }
    }

    /// Passes when `observed ≥ threshold`.
    fn at_least(name: impl Into<String>, observed: f64, threshold: f64) -> Self {
        Self {
            name: name.into(),
            status: if observed >= threshold {
                Status::Pass
            } else {
                Status::Fail
            },
            observed,
            threshold,
        }
    }

    fn skipped(name: impl Into<String>, threshold: f64) -> Self {
        Self {
            name: name.into(),
            status: Status::SkippedBudget,
            observed: f64::NAN,
            threshold,
        }
    }

    fn failed(name: impl Into<String>, why: &SimError) -> Self {
        eprintln!("check failed to run: {why}");
        Self {
            name: name.into(),
            status: Status::Fail,
            observed: f64::NAN,
            threshold: f64::NAN,
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct VerifyOptions {
    pub budget: Budget,
    pub workers: usize,
    pub seed: u64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            budget: Budget::Smoke,
            workers: 1,
            seed: 20_240_917,
        }
    }
}

impl VerifyOptions {
    fn full(&self) -> bool {
        self.budget == Budget::Full
    }

    /// An independent stream per check.
    fn rng(&self, tag: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(derive_seed(self.seed, tag))
    }

    fn ensemble(
        &self,
        tag: u64,
        config: RunConfig,
        instance: &BanditInstance,
        runs: usize,
    ) -> Result<Ensemble, SimError> {
        let mut config = config;
        config.seed = derive_seed(self.seed, tag);
        run_ensemble(&config, instance, runs, self.workers)
    }
}

pub fn run_suite(suite: Suite, opts: &VerifyOptions) -> Vec<CheckResult> {
    match suite {
        Suite::Identities => identities(opts),
        Suite::Samplers => samplers(opts),
        Suite::Lemmas => lemmas(opts),
        Suite::Regret => regret(opts),
        Suite::All => [identities(opts), samplers(opts), lemmas(opts), regret(opts)].concat(),
    }
}

pub fn report_csv(results: &[CheckResult]) -> String {
    let mut table = Table::new(&VERIFY_HEADER);
    for r in results {
        table.row([
            r.name.clone(),
            r.status.to_string(),
            fmt_f64(r.observed),
            fmt_f64(r.threshold),
        ]);
    }
    table.finish()
}

pub fn all_passed(results: &[CheckResult]) -> bool {
    results.iter().all(|r| r.status != Status::Fail)
}

fn bin(n: u64, p: f64) -> BinomialParams<f64> {
    BinomialParams { n, p }
}

fn beta(a: u64, b: u64) -> BetaParams {
    BetaParams::new(a, b).expect("shapes >= 1")
}

fn unit_grid() -> impl Iterator<Item = f64> + Clone {
    (1..100).map(|i| i as f64 / 100.0)
}

// ---------------------------------------------------------------------------
// identities

fn identities(opts: &VerifyOptions) -> Vec<CheckResult> {
    let shapes: Vec<u64> = if opts.full() {
        (1..=100).collect()
    } else {
        vec![1, 2, 3, 5, 8, 13, 21, 34, 55, 89, 100]
    };
    let mut fact1 = 0.0f64;
    let mut decreases = 0u64;
    for &a in &shapes {
        for &b in &shapes {
            let mut prev = 0.0;
            for y in unit_grid() {
                let fast = beta_cdf(beta(a, b), y).expect("y in [0,1]");
                let oracle = beta_cdf_oracle(beta(a, b), y).expect("y in [0,1]");
                fact1 = fact1.max((fast - oracle).abs());
                if fast < prev {
                    decreases += 1;
                }
                prev = fast;
            }
        }
    }

    let mut routes = 0.0f64;
    for n in [1_000u64, 2_500, 6_000, 10_000] {
        for p in [0.05, 0.3, 0.5, 0.71, 0.97] {
            let np = n as f64 * p;
            let sd = (np * (1.0 - p)).sqrt();
            for z in [-6.0, -3.0, -1.0, 0.0, 0.5, 2.0, 5.0] {
                let k = (np + z * sd).floor() as i64;
                let a = binomial_cdf_summation(bin(n, p), k).expect("valid");
                let b = binomial_cdf_continued_fraction(bin(n, p), k).expect("valid");
                routes = routes.max((a - b).abs());
            }
        }
    }

    let mut median_failures = 0u64;
    for n in 1..=60u64 {
        for p in (1..=19).map(|i| i as f64 * 0.05) {
            let m = binomial_median(bin(n, p)).expect("valid");
            let np = n as f64 * p;
            let in_range = m == np.floor() as u64 || m == np.ceil() as u64;
            let below = binomial_cdf(bin(n, p), m as i64).expect("valid");
            let strictly_below = binomial_cdf(bin(n, p), m as i64 - 1).expect("valid");
            if !(in_range && below >= 0.5 && 1.0 - strictly_below >= 0.5) {
                median_failures += 1;
            }
        }
    }

    let mut out = vec![
        CheckResult::at_most("fact1_beta_binomial", fact1, 1e-10),
        CheckResult::at_most("beta_cdf_monotone", decreases as f64, 0.0),
        CheckResult::at_most("binomial_route_agreement", routes, 1e-12),
        CheckResult::at_most("binomial_median", median_failures as f64, 0.0),
    ];

    for side in TailSide::ALL {
        let mut worst = f64::NEG_INFINITY;
        for n in [10u64, 50, 100, 500] {
            for p in (1..=9).map(|i| i as f64 / 10.0) {
                for delta in (1..=30).map(|i| i as f64 / 100.0) {
                    let q = TailBoundQuery { n, p, delta, side };
                    let exact = exact_tail(q).expect("valid");
                    worst = worst.max(exact - chernoff_tail_bound(q));
                }
            }
        }
        out.push(CheckResult::at_most(format!("chernoff_{}", side.name()), worst, 0.0));
    }

    let mut pinsker = f64::INFINITY;
    for y in unit_grid() {
        for mu in unit_grid() {
            let d = y - mu;
            pinsker = pinsker.min(kl_bernoulli(y, mu).value - 2.0 * d * d);
        }
    }
    out.push(CheckResult::at_least("pinsker", pinsker, 0.0));

    let mut identity = 0.0f64;
    let mut dominance = f64::INFINITY;
    for t in [10.0f64, 1e2, 1e3, 1e4, 1e5, 1e6] {
        for delta in [0.01f64, 0.05, 0.1, 0.3, 0.5, 1.0] {
            let t1 = thm1_bound(t, delta).expect("valid");
            let eq1 = eq1_play_count_bound(t, delta).expect("valid");
            identity = identity.max((t1 - delta * eq1).abs());
            dominance = dominance.min(thm2_bound(t, &[delta]).expect("valid") - t1);
        }
    }
    out.push(CheckResult::at_most("thm1_equals_gap_times_play_bound", identity, 0.0));
    out.push(CheckResult::at_least("thm2_dominates_thm1", dominance, 0.0));
    out
}

// ---------------------------------------------------------------------------
// samplers

fn samplers(opts: &VerifyOptions) -> Vec<CheckResult> {
    let n = if opts.full() { 100_000 } else { 10_000 };
    let mut out = Vec::new();

    for (i, (a, b)) in [(1, 1), (2, 5), (30, 30), (100, 3), (1000, 1000)]
        .into_iter()
        .enumerate()
    {
        let mut rng = opts.rng(100 + i as u64);
        let mut xs: Vec<f64> = (0..n).map(|_| sample_beta(beta(a, b), &mut rng)).collect();
        let d = ks_statistic(&mut xs, |y| beta_cdf(beta(a, b), y.clamp(0.0, 1.0)).expect("clamped"));
        out.push(CheckResult::at_most(
            format!("beta_sampler_ks[{a},{b}]"),
            d,
            ks_critical_value(n, SIGNIFICANCE),
        ));
    }

    for (i, (a, b)) in [(2, 5), (10, 20), (32, 32)].into_iter().enumerate() {
        let mut rng = opts.rng(200 + i as u64);
        let mut xs: Vec<f64> = (0..n).map(|_| sample_beta(beta(a, b), &mut rng)).collect();
        let mut ys: Vec<f64> = (0..n)
            .map(|_| sample_beta_order_statistic(beta(a, b), &mut rng).expect("small shapes"))
            .collect();
        out.push(CheckResult::at_most(
            format!("beta_order_statistic_two_sample[{a},{b}]"),
            ks_two_sample(&mut xs, &mut ys),
            ks_two_sample_critical_value(n, n, SIGNIFICANCE),
        ));
    }

    // Three arms with identical posteriors: each must be chosen 1/3 of the time.
    let mut rng = opts.rng(300);
    let state = PosteriorState::from_counts(vec![3; 3], vec![4; 3]);
    let mut counts = [0u64; 3];
    for _ in 0..n {
        counts[ts_select(&state, &mut rng)] += 1;
    }
    let expected = n as f64 / 3.0;
    let chi2: f64 = counts.iter().map(|&c| (c as f64 - expected).powi(2) / expected).sum();
    // Two degrees of freedom: the survival function is exp(−x/2).
    out.push(CheckResult::at_most(
        "ts_exchangeable_chi2",
        chi2,
        -2.0 * SIGNIFICANCE.ln(),
    ));

    // Probability matching: Pr(choose 0) = Pr(θ₀ > θ₁), estimated independently
    // with the order-statistic sampler.
    let mut rng = opts.rng(301);
    let state = PosteriorState::from_counts(vec![2, 3], vec![4, 3]);
    let chosen = (0..n).filter(|_| ts_select(&state, &mut rng) == 0).count() as f64 / n as f64;
    let mut rng = opts.rng(302);
    let reference = (0..n)
        .filter(|_| {
            let t0 = sample_beta_order_statistic(beta(3, 5), &mut rng).expect("small");
            let t1 = sample_beta_order_statistic(beta(4, 4), &mut rng).expect("small");
            t0 > t1
        })
        .count() as f64
        / n as f64;
    let se = ((chosen * (1.0 - chosen) + reference * (1.0 - reference)) / n as f64).sqrt();
    out.push(CheckResult::at_most(
        "ts_probability_matching_z",
        (chosen - reference).abs() / se,
        3.0,
    ));

    let mut rng = opts.rng(303);
    let r = 0.3;
    let ones = (0..n).filter(|_| binarize(r, &mut rng).expect("in range") == 1).count() as f64 / n as f64;
    let se = (r * (1.0 - r) / n as f64).sqrt();
    out.push(CheckResult::at_most(
        "binarize_success_rate_z",
        (ones - r).abs() / se,
        3.0,
    ));

    out
}

// ---------------------------------------------------------------------------
// lemmas

/// The four `(j, s, y)` cases of the geometric-count check.
pub const LEMMA1_CASES: [(u64, u64, f64); 4] = [(0, 0, 0.5), (2, 1, 0.5), (10, 9, 0.3), (50, 25, 0.6)];

/// z-score of the sample mean of `min{X(j,s,y), ∞}` against its closed form.
///
/// The standard error is the one implied by the closed form (a geometric count
/// with mean `m` has variance `m(1+m)`), so cases where almost every draw is 0
/// do not end up with a zero empirical SE.
pub fn lemma1_z<R: Rng>(j: u64, s: u64, y: f64, reps: u64, rng: &mut R) -> (f64, f64, f64) {
    let want = expected_interplay_gap(j, s, y).expect("valid case").value;
    let total: u64 = (0..reps)
        .map(|_| sample_threshold_trials(j, s, y, u64::MAX, rng).expect("valid case"))
        .sum();
    let mean = total as f64 / reps as f64;
    let se = (want * (1.0 + want) / reps as f64).sqrt();
    ((mean - want).abs() / se, mean, want)
}

fn lemmas(opts: &VerifyOptions) -> Vec<CheckResult> {
    let reps = if opts.full() { 100_000 } else { 10_000 };
    let mut out = Vec::new();
    for (i, &(j, s, y)) in LEMMA1_CASES.iter().enumerate() {
        let (z, _, _) = lemma1_z(j, s, y, reps, &mut opts.rng(400 + i as u64));
        out.push(CheckResult::at_most(
            format!("lemma1_geometric_mean_z[{j},{s},{y}]"),
            z,
            3.0,
        ));
    }

    // Envelope soundness: E[min{X(j, s(j), y), T}] with s(j) ~ Binomial(j, μ₁)
    // must not exceed the envelope beyond Monte Carlo error.
    let horizon = 1000u64;
    let env_reps = if opts.full() { 20_000 } else { 2_000 };
    let mut rng = opts.rng(410);
    let mut worst = f64::NEG_INFINITY;
    for (y, mu1) in [(0.3, 0.5), (0.4, 0.6), (0.2, 0.7)] {
        for j in [0u64, 1, 5, 20, 50, 200, 1000] {
            let draws: Vec<f64> = (0..env_reps)
                .map(|_| {
                    let s = (0..j).filter(|_| rng.random::<f64>() < mu1).count() as u64;
                    sample_threshold_trials(j, s, y, horizon, &mut rng).expect("valid") as f64
                })
                .collect();
            let n = draws.len() as f64;
            let mean = draws.iter().sum::<f64>() / n;
            let var = draws.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
            let envelope = lemma3_envelope(j, y, mu1, horizon).expect("valid");
            worst = worst.max(mean - 3.0 * (var / n).sqrt() - envelope);
        }
    }
    out.push(CheckResult::at_most("lemma3_envelope_soundness", worst, 0.0));

    out.push(lemma2_check(opts));
    out
}

/// Per-step frequency of the E₂ violation for μ = (0.5, 0.4), T = 100.
fn lemma2_check(opts: &VerifyOptions) -> CheckResult {
    let name = "lemma2_e2_frequency";
    let horizon = 100u64;
    let runs = 100_000usize;
    let p = 2.0 / (horizon * horizon) as f64;
    let threshold = p + 3.0 * (p * (1.0 - p) / runs as f64).sqrt();
    if !opts.full() {
        return CheckResult::skipped(name, threshold);
    }
    let instance = BanditInstance::bernoulli(&[0.5, 0.4]).expect("valid");
    let config = RunConfig::new(horizon, 0, PolicyKind::Thompson).with_diagnostics(true);
    match opts.ensemble(420, config, &instance, runs) {
        Ok(e) => {
            let freq = e.diagnostics.and_then(|d| d.max_e2_frequency()).unwrap_or(f64::NAN);
            CheckResult::at_most(name, freq, threshold)
        }
        Err(err) => CheckResult::failed(name, &err),
    }
}

// ---------------------------------------------------------------------------
// regret

fn last(e: &Ensemble) -> &CheckpointSummary {
    e.summary.last()
}

fn regret(opts: &VerifyOptions) -> Vec<CheckResult> {
    let full = opts.full();
    let mut out = Vec::new();
    let two_arm = BanditInstance::bernoulli(&[0.5, 0.4]).expect("valid");

    // Two-arm regret against the `thm1` curve.
    let (horizon, runs) = if full { (100_000, 1000) } else { (10_000, 100) };
    let checkpoints: Vec<u64> = [1_000, 10_000, 100_000].into_iter().filter(|&t| t <= horizon).collect();
    let config = RunConfig::new(horizon, 0, PolicyKind::Thompson).with_checkpoints(checkpoints);
    match opts.ensemble(500, config, &two_arm, runs) {
        Ok(e) => {
            let c = last(&e);
            out.push(CheckResult::at_most(
                "thm1_dominance",
                c.mean_regret + 3.0 * c.stderr.unwrap_or(0.0),
                thm1_bound(horizon as f64, 0.1).expect("valid"),
            ));
            if full {
                let r: Vec<f64> = e.summary.checkpoints.iter().map(|c| c.mean_regret).collect();
                let (a, b) = (r[1] - r[0], r[2] - r[1]);
                out.push(CheckResult::at_most(
                    "log_growth_increment_ratio",
                    (a / b).max(b / a),
                    2.5,
                ));
            } else {
                out.push(CheckResult::skipped("log_growth_increment_ratio", 2.5));
            }
        }
        Err(err) => out.push(CheckResult::failed("thm1_dominance", &err)),
    }

    // Five arms against the `thm2_appendix` curve.
    let means = [0.6, 0.5, 0.45, 0.4, 0.3];
    let gaps: Vec<f64> = means[1..].iter().map(|m| means[0] - m).collect();
    let five = BanditInstance::bernoulli(&means).expect("valid");
    let (horizon, runs) = if full { (100_000, 500) } else { (10_000, 50) };
    match opts.ensemble(510, RunConfig::new(horizon, 0, PolicyKind::Thompson), &five, runs) {
        Ok(e) => {
            let c = last(&e);
            out.push(CheckResult::at_most(
                "thm2_dominance",
                c.mean_regret + 3.0 * c.stderr.unwrap_or(0.0),
                thm2_bound(horizon as f64, &gaps).expect("valid"),
            ));
        }
        Err(err) => out.push(CheckResult::failed("thm2_dominance", &err)),
    }

    // Duplicating the optimal arm must not increase regret.
    let (horizon, runs) = if full { (10_000, 2000) } else { (1_000, 200) };
    let dup = BanditInstance::bernoulli(&[0.5, 0.4, 0.5]).expect("valid");
    let config = RunConfig::new(horizon, 0, PolicyKind::Thompson);
    match (
        opts.ensemble(520, config.clone(), &two_arm, runs),
        opts.ensemble(521, config, &dup, runs),
    ) {
        (Ok(a), Ok(b)) => {
            let (ca, cb) = (last(&a), last(&b));
            let se = (ca.stderr.unwrap_or(0.0).powi(2) + cb.stderr.unwrap_or(0.0).powi(2)).sqrt();
            out.push(CheckResult::at_most(
                "duplicate_optimal_arm_monotonicity",
                cb.mean_regret,
                ca.mean_regret + 3.0 * se,
            ));
        }
        (Err(err), _) | (_, Err(err)) => out.push(CheckResult::failed("duplicate_optimal_arm_monotonicity", &err)),
    }

    // Binarized [0,1] rewards with the same mean evolve like Bernoulli ones.
    let bernoulli = BanditInstance::bernoulli(&[0.5, 0.4]).expect("valid");
    let scaled = BanditInstance::new(vec![
        tsbandit::ArmModel::new(tsbandit::ArmLaw::ScaledBeta { a: 2.0, b: 2.0 }).expect("valid"),
        tsbandit::ArmModel::bernoulli(0.4).expect("valid"),
    ])
    .expect("valid");
    let config = RunConfig::new(horizon, 0, PolicyKind::Thompson);
    match (
        opts.ensemble(530, config.clone(), &bernoulli, runs),
        opts.ensemble(531, config, &scaled, runs),
    ) {
        (Ok(a), Ok(b)) => out.push(CheckResult::at_most(
            "binarized_reduction_play_counts_z",
            play_count_z(last(&a), last(&b)),
            3.0,
        )),
        (Err(err), _) | (_, Err(err)) => out.push(CheckResult::failed("binarized_reduction_play_counts_z", &err)),
    }

    // Uniform random play has expected regret T · mean gap.
    let runs = if full { 2000 } else { 200 };
    let horizon = 1_000;
    match opts.ensemble(
        540,
        RunConfig::new(horizon, 0, PolicyKind::UniformRandom),
        &two_arm,
        runs,
    ) {
        Ok(e) => {
            let c = last(&e);
            let want = horizon as f64 * 0.05;
            out.push(CheckResult::at_most(
                "uniform_random_regret_z",
                (c.mean_regret - want).abs() / c.stderr.unwrap_or(f64::NAN),
                3.0,
            ));
        }
        Err(err) => out.push(CheckResult::failed("uniform_random_regret_z", &err)),
    }

    // Delayed feedback still yields sublinear regret.
    let runs = if full { 200 } else { 20 };
    for (i, d) in [10u64, 100].into_iter().enumerate() {
        let name = format!("delay_sublinearity[fixed:{d}]");
        let config = RunConfig::new(100_000, 0, PolicyKind::Thompson)
            .with_checkpoints(vec![10_000, 100_000])
            .with_delay(DelayModel::Fixed(d));
        match opts.ensemble(550 + i as u64, config, &two_arm, runs) {
            Ok(e) => {
                let c = &e.summary.checkpoints;
                let ratio = (c[1].mean_regret / 1e5) / (c[0].mean_regret / 1e4);
                out.push(CheckResult::at_most(name, ratio, 0.5));
            }
            Err(err) => out.push(CheckResult::failed(name, &err)),
        }
    }
    out
}

/// Largest per-arm z-score between two ensembles' mean play counts.
pub fn play_count_z(a: &CheckpointSummary, b: &CheckpointSummary) -> f64 {
    a.mean_plays
        .iter()
        .zip(&b.mean_plays)
        .zip(a.plays_stderr.iter().zip(&b.plays_stderr))
        .map(|((ma, mb), (sa, sb))| {
            let se = (sa.unwrap_or(0.0).powi(2) + sb.unwrap_or(0.0).powi(2)).sqrt();
            (ma - mb).abs() / se
        })
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names() {
        assert_eq!("lemmas".parse::<Suite>().unwrap(), Suite::Lemmas);
        assert!("everything".parse::<Suite>().is_err());
        assert!("huge".parse::<Budget>().is_err());
    }

    #[test]
    fn identities_smoke_passes_and_reports_fact1() {
        let results = run_suite(Suite::Identities, &VerifyOptions::default());
        let fact1 = results.iter().find(|r| r.name == "fact1_beta_binomial").unwrap();
        assert_eq!(fact1.threshold, 1e-10);
        assert!(all_passed(&results), "{results:#?}");
    }

    #[test]
    fn smoke_lemmas_skip_the_expensive_check() {
        let results = run_suite(Suite::Lemmas, &VerifyOptions::default());
        let l2 = results.iter().find(|r| r.name == "lemma2_e2_frequency").unwrap();
        assert_eq!(l2.status, Status::SkippedBudget);
        assert!(all_passed(&results), "{results:#?}");
        assert!(report_csv(&results).contains("lemma2_e2_frequency,skipped(budget),NaN,"));
    }
}
