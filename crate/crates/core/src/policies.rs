//! Arm-selection policies behind one select/observe contract.
//!
//! Every argmax breaks ties toward the lowest index. Thompson Sampling draws
//! its per-arm samples in arm order, so a run is replayable from its stream.

use std::fmt;
use std::str::FromStr;

use rand::Rng;

use crate::bandit::PosteriorState;
use crate::numerics::{sample_beta, BetaParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PolicyKind {
    Thompson,
    Ucb1,
    UniformRandom,
}

impl PolicyKind {
    pub const ALL: [PolicyKind; 3] = [PolicyKind::Thompson, PolicyKind::Ucb1, PolicyKind::UniformRandom];

    pub fn name(self) -> &'static str {
        match self {
            PolicyKind::Thompson => "thompson",
            PolicyKind::Ucb1 => "ucb1",
            PolicyKind::UniformRandom => "uniform_random",
        }
    }
}

impl fmt::Display for PolicyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for PolicyKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        PolicyKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| format!("unknown policy `{s}` (expected thompson, ucb1 or uniform_random)"))
    }
}

fn argmax(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, v) in values.iter().enumerate().skip(1) {
        if *v > values[best] {
            best = i;
        }
    }
    best
}

/// Thompson Sampling: one Beta(S_i+1, F_i+1) draw per arm, play the argmax.
pub fn ts_select<R: Rng + ?Sized>(state: &PosteriorState, rng: &mut R) -> usize {
    let mut thetas = Vec::with_capacity(state.arms());
    ts_select_into(state, rng, &mut thetas)
}

/// As [`ts_select`], leaving the sampled θ values in `thetas`.
pub fn ts_select_into<R: Rng + ?Sized>(state: &PosteriorState, rng: &mut R, thetas: &mut Vec<f64>) -> usize {
    thetas.clear();
    thetas.extend(
        state
            .successes()
            .iter()
            .zip(state.failures())
            .map(|(&s, &f)| sample_beta(BetaParams::posterior(s, f), rng)),
    );
    argmax(thetas)
}

/// UCB1 bookkeeping on raw rewards.
#[derive(Debug, Clone, PartialEq)]
pub struct Ucb1State {
    /// Selections issued per arm.
    plays: Vec<u64>,
    /// Rewards received per arm.
    counts: Vec<u64>,
    means: Vec<f64>,
    /// Current step, counted from 1.
    t: u64,
}

impl Ucb1State {
    pub fn new(arms: usize) -> Self {
        Self {
            plays: vec![0; arms],
            counts: vec![0; arms],
            means: vec![0.0; arms],
            t: 1,
        }
    }

    /// State after every arm has been played and observed `counts[i]` times.
    pub fn from_parts(counts: Vec<u64>, means: Vec<f64>, t: u64) -> Self {
        assert_eq!(counts.len(), means.len(), "counts and means differ in length");
        Self {
            plays: counts.clone(),
            counts,
            means,
            t,
        }
    }

    pub fn set_time(&mut self, t: u64) {
        self.t = t;
    }

    pub fn time(&self) -> u64 {
        self.t
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn means(&self) -> &[f64] {
        &self.means
    }

    fn record_play(&mut self, arm: usize) {
        self.plays[arm] += 1;
    }

    /// Folds a raw reward into the running mean.
    pub fn observe(&mut self, arm: usize, raw: f64) {
        self.counts[arm] += 1;
        let k = self.counts[arm] as f64;
        self.means[arm] += (raw - self.means[arm]) / k;
    }
}

/// UCB1 index rule `μ̂_i + sqrt(2 ln t / k_i)`.
///
/// Arms never selected go first, in index order. Arms selected but not yet
/// observed (possible under delayed feedback) have an infinite index.
pub fn ucb1_select(state: &Ucb1State) -> usize {
    if let Some(arm) = state.plays.iter().position(|&p| p == 0) {
        return arm;
    }
    if let Some(arm) = state.counts.iter().position(|&k| k == 0) {
        return arm;
    }
    let log_t = (state.t.max(1) as f64).ln();
    let mut best = 0;
    let mut best_index = f64::NEG_INFINITY;
    for (i, (&k, &m)) in state.counts.iter().zip(&state.means).enumerate() {
        let index = m + (2.0 * log_t / k as f64).sqrt();
        if index > best_index {
            best = i;
            best_index = index;
        }
    }
    best
}

/// Run-local policy state.
#[derive(Debug, Clone, PartialEq)]
pub enum PolicyState {
    Thompson {
        posterior: PosteriorState,
        thetas: Vec<f64>,
    },
    Ucb1(Ucb1State),
    UniformRandom {
        arms: usize,
    },
}

impl PolicyState {
    pub fn new(kind: PolicyKind, arms: usize) -> Self {
        match kind {
            PolicyKind::Thompson => PolicyState::Thompson {
                posterior: PosteriorState::new(arms),
                thetas: Vec::with_capacity(arms),
            },
            PolicyKind::Ucb1 => PolicyState::Ucb1(Ucb1State::new(arms)),
            PolicyKind::UniformRandom => PolicyState::UniformRandom { arms },
        }
    }

    pub fn kind(&self) -> PolicyKind {
        match self {
            PolicyState::Thompson { .. } => PolicyKind::Thompson,
            PolicyState::Ucb1(_) => PolicyKind::Ucb1,
            PolicyState::UniformRandom { .. } => PolicyKind::UniformRandom,
        }
    }

    /// Chooses the arm for step `t` (1-based).
    pub fn select<R: Rng + ?Sized>(&mut self, t: u64, rng: &mut R) -> usize {
        match self {
            PolicyState::Thompson { posterior, thetas } => ts_select_into(posterior, rng, thetas),
            PolicyState::Ucb1(state) => {
                state.set_time(t);
                let arm = ucb1_select(state);
                state.record_play(arm);
                arm
            }
            PolicyState::UniformRandom { arms } => rng.random_range(0..*arms),
        }
    }

    /// Delivers one feedback event: Thompson takes the binary outcome, UCB1 the
    /// raw reward, uniform-random nothing.
    pub fn observe(&mut self, arm: usize, raw: f64, binarized: u8) {
        match self {
            PolicyState::Thompson { posterior, .. } => posterior.update(arm, binarized),
            PolicyState::Ucb1(state) => state.observe(arm, raw),
            PolicyState::UniformRandom { .. } => {}
        }
    }

    /// θ samples from the latest Thompson selection.
    pub fn thetas(&self) -> Option<&[f64]> {
        match self {
            PolicyState::Thompson { thetas, .. } => Some(thetas),
            _ => None,
        }
    }

    pub fn posterior(&self) -> Option<&PosteriorState> {
        match self {
            PolicyState::Thompson { posterior, .. } => Some(posterior),
            _ => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn single_arm_always_zero() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let s = PosteriorState::new(1);
        for _ in 0..100 {
            assert_eq!(ts_select(&s, &mut rng), 0);
        }
    }

    #[test]
    fn ts_strongly_prefers_confident_arm() {
        // Pr(Beta(1,1001) > Beta(1001,1)) = 1/C(2002,1001) by the Beta–Binomial
        // identity, i.e. astronomically small.
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let s = PosteriorState::from_counts(vec![1000, 0], vec![0, 1000]);
        let hits = (0..10_000).filter(|_| ts_select(&s, &mut rng) == 0).count();
        assert!(hits as f64 / 10_000.0 > 0.999);
    }

    #[test]
    fn ts_replay_equality() {
        let s = PosteriorState::from_counts(vec![3, 4, 5], vec![6, 2, 9]);
        let mut a = ChaCha8Rng::seed_from_u64(42);
        let mut b = ChaCha8Rng::seed_from_u64(42);
        for _ in 0..1000 {
            assert_eq!(ts_select(&s, &mut a), ts_select(&s, &mut b));
        }
    }

    #[test]
    fn ucb1_initialization_round() {
        let mut p = PolicyState::new(PolicyKind::Ucb1, 3);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        for t in 1..=3 {
            let arm = p.select(t, &mut rng);
            assert_eq!(arm as u64, t - 1);
            p.observe(arm, 0.5, 0);
        }
    }

    #[test]
    fn ucb1_prefers_fewer_plays_at_equal_means() {
        let s = Ucb1State::from_parts(vec![5, 3, 9], vec![0.4, 0.4, 0.4], 17);
        assert_eq!(ucb1_select(&s), 1);
    }

    #[test]
    fn ucb1_index_example() {
        let s = Ucb1State::from_parts(vec![100, 10], vec![0.5, 0.5], 111);
        assert_eq!(ucb1_select(&s), 1);
    }

    #[test]
    fn ucb1_ties_to_lowest_index() {
        let s = Ucb1State::from_parts(vec![4, 4], vec![0.5, 0.5], 9);
        assert_eq!(ucb1_select(&s), 0);
    }

    #[test]
    fn observe_dispatch() {
        let mut ts = PolicyState::new(PolicyKind::Thompson, 2);
        ts.observe(1, 0.3, 1);
        assert_eq!(ts.posterior().unwrap().successes(), &[0, 1]);

        let mut ucb = PolicyState::Ucb1(Ucb1State::from_parts(vec![1, 1], vec![0.3, 0.9], 3));
        ucb.observe(0, 0.7, 0);
        if let PolicyState::Ucb1(s) = &ucb {
            assert_eq!(s.counts()[0], 2);
            assert!((s.means()[0] - 0.5).abs() < 1e-15);
        }

        let mut uni = PolicyState::new(PolicyKind::UniformRandom, 4);
        let before = uni.clone();
        uni.observe(2, 0.9, 1);
        assert_eq!(uni, before);
    }

    #[test]
    fn kind_names_round_trip() {
        for k in PolicyKind::ALL {
            assert_eq!(k.name().parse::<PolicyKind>().unwrap(), k);
        }
        assert!("egreedy".parse::<PolicyKind>().is_err());
    }
}
