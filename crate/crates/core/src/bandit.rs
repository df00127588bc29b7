//! Ground-truth bandit instances and posterior bookkeeping.

use rand::Rng;
use rand_distr::{Beta, Distribution};
use thiserror::Error;

use crate::numerics::sample_bernoulli;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BanditError {
    #[error("arm {arm}: {reason}")]
    InvalidArm { arm: usize, reason: String },
    #[error("an instance needs at least 2 arms, got {0}")]
    TooFewArms(usize),
    #[error("arm index {arm} out of range for {arms} arms")]
    IndexOutOfRange { arm: usize, arms: usize },
    #[error("arm {arm} ties the optimal mean {mean}, but a unique optimum was declared")]
    TiedOptimum { arm: usize, mean: f64 },
    #[error("raw reward {0} outside [0, 1]")]
    RewardOutOfRange(f64),
}

/// Reward law of a single arm. All supports lie in `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub enum ArmLaw {
    Bernoulli {
        mu: f64,
    },
    Discrete {
        values: Vec<f64>,
        probs: Vec<f64>,
    },
    /// Beta(a, b) on `[0, 1]`, real shapes.
    ScaledBeta {
        a: f64,
        b: f64,
    },
    Uniform {
        lo: f64,
        hi: f64,
    },
    Constant {
        c: f64,
    },
}

fn in_unit(x: f64) -> bool {
    (0.0..=1.0).contains(&x)
}

impl ArmLaw {
    fn validate(&self) -> Result<(), String> {
        match self {
            ArmLaw::Bernoulli { mu } if !in_unit(*mu) => Err(format!("bernoulli mean {mu} outside [0, 1]")),
            ArmLaw::Constant { c } if !in_unit(*c) => Err(format!("constant {c} outside [0, 1]")),
            ArmLaw::Uniform { lo, hi } if !(in_unit(*lo) && in_unit(*hi) && lo <= hi) => {
                Err(format!("uniform bounds [{lo}, {hi}] must satisfy 0 <= lo <= hi <= 1"))
            }
            ArmLaw::ScaledBeta { a, b } if !(*a > 0.0 && *b > 0.0 && a.is_finite() && b.is_finite()) => {
                Err(format!("beta shapes ({a}, {b}) must be positive"))
            }
            ArmLaw::Discrete { values, probs } => {
                if values.is_empty() || values.len() != probs.len() {
                    return Err("discrete law needs matching, non-empty values and probs".into());
                }
                if let Some(v) = values.iter().find(|v| !in_unit(**v)) {
                    return Err(format!("discrete support value {v} outside [0, 1]"));
                }
                if let Some(p) = probs.iter().find(|p| !in_unit(**p)) {
                    return Err(format!("discrete probability {p} outside [0, 1]"));
                }
                let total: f64 = probs.iter().sum();
                if (total - 1.0).abs() > 1e-12 {
                    return Err(format!("discrete probabilities sum to {total}, not 1"));
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    /// Analytic mean.
    pub fn mean(&self) -> f64 {
        match self {
            ArmLaw::Bernoulli { mu } => *mu,
            ArmLaw::Discrete { values, probs } => values.iter().zip(probs).map(|(v, p)| v * p).sum(),
            ArmLaw::ScaledBeta { a, b } => a / (a + b),
            ArmLaw::Uniform { lo, hi } => 0.5 * (lo + hi),
            ArmLaw::Constant { c } => *c,
        }
    }

    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match self {
            ArmLaw::Bernoulli { mu } => {
                let u: f64 = rng.random();
                if u < *mu {
                    1.0
                } else {
                    0.0
                }
            }
            ArmLaw::Discrete { values, probs } => {
                let u: f64 = rng.random();
                let mut acc = 0.0;
                for (v, p) in values.iter().zip(probs) {
                    acc += p;
                    if u < acc {
                        return *v;
                    }
                }
                *values.last().expect("validated non-empty")
            }
            ArmLaw::ScaledBeta { a, b } => Beta::new(*a, *b).expect("validated shapes").sample(rng),
            ArmLaw::Uniform { lo, hi } => {
                let u: f64 = rng.random();
                lo + (hi - lo) * u
            }
            ArmLaw::Constant { c } => *c,
        }
    }
}

/// An arm with its law and the law's mean, stored once so regret accounting
/// never depends on sampling.
#[derive(Debug, Clone, PartialEq)]
pub struct ArmModel {
    law: ArmLaw,
    mean: f64,
}

impl ArmModel {
    pub fn new(law: ArmLaw) -> Result<Self, String> {
        law.validate()?;
        let mean = law.mean();
        Ok(Self { law, mean })
    }

    pub fn bernoulli(mu: f64) -> Result<Self, String> {
        Self::new(ArmLaw::Bernoulli { mu })
    }

    pub fn law(&self) -> &ArmLaw {
        &self.law
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }
}

/// An immutable set of arms with derived optimum and gaps.
#[derive(Debug, Clone, PartialEq)]
pub struct BanditInstance {
    arms: Vec<ArmModel>,
    mu_star: f64,
    gaps: Vec<f64>,
    optimal: Vec<usize>,
}

impl BanditInstance {
    /// Builds an instance; several arms may share the optimal mean.
    pub fn new(arms: Vec<ArmModel>) -> Result<Self, BanditError> {
        if arms.len() < 2 {
            return Err(BanditError::TooFewArms(arms.len()));
        }
        let mu_star = arms.iter().map(ArmModel::mean).fold(f64::NEG_INFINITY, f64::max);
        let gaps: Vec<f64> = arms.iter().map(|a| mu_star - a.mean()).collect();
        let optimal = gaps
            .iter()
            .enumerate()
            .filter(|(_, g)| **g == 0.0)
            .map(|(i, _)| i)
            .collect();
        Ok(Self {
            arms,
            mu_star,
            gaps,
            optimal,
        })
    }

    /// Builds an instance and rejects any second arm attaining the optimum.
    pub fn with_unique_optimum(arms: Vec<ArmModel>) -> Result<Self, BanditError> {
        let instance = Self::new(arms)?;
        if let Some(&arm) = instance.optimal.get(1) {
            return Err(BanditError::TiedOptimum {
                arm,
                mean: instance.mu_star,
            });
        }
        Ok(instance)
    }

    /// Bernoulli arms with the given means.
    pub fn bernoulli(means: &[f64]) -> Result<Self, BanditError> {
        let arms = means
            .iter()
            .enumerate()
            .map(|(arm, &mu)| ArmModel::bernoulli(mu).map_err(|reason| BanditError::InvalidArm { arm, reason }))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(arms)
    }

    pub fn arms(&self) -> &[ArmModel] {
        &self.arms
    }

    pub fn len(&self) -> usize {
        self.arms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arms.is_empty()
    }

    pub fn mu_star(&self) -> f64 {
        self.mu_star
    }

    pub fn gaps(&self) -> &[f64] {
        &self.gaps
    }

    pub fn means(&self) -> Vec<f64> {
        self.arms.iter().map(ArmModel::mean).collect()
    }

    /// Indices attaining `mu_star`, ascending.
    pub fn optimal_arms(&self) -> &[usize] {
        &self.optimal
    }

    pub fn has_unique_optimum(&self) -> bool {
        self.optimal.len() == 1
    }

    fn check(&self, arm: usize) -> Result<(), BanditError> {
        if arm < self.arms.len() {
            Ok(())
        } else {
            Err(BanditError::IndexOutOfRange {
                arm,
                arms: self.arms.len(),
            })
        }
    }

    /// One reward from `arm`'s law.
    pub fn draw_reward<R: Rng + ?Sized>(&self, arm: usize, rng: &mut R) -> Result<f64, BanditError> {
        self.check(arm)?;
        Ok(self.arms[arm].law.sample(rng))
    }

    /// `Δ_arm`, the expected loss of one play of `arm`.
    pub fn pseudo_regret_increment(&self, arm: usize) -> Result<f64, BanditError> {
        self.check(arm)?;
        Ok(self.gaps[arm])
    }
}

/// Bernoulli trial with success probability `raw`, turning a `[0,1]` reward
/// into a coin flip with the same mean.
pub fn binarize<R: Rng + ?Sized>(raw: f64, rng: &mut R) -> Result<u8, BanditError> {
    sample_bernoulli(raw, rng).map_err(|_| BanditError::RewardOutOfRange(raw))
}

/// A play whose outcome is (or will be) fed back to the policy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FeedbackEvent {
    pub t_played: u64,
    pub arm: usize,
    pub raw_reward: f64,
    pub binarized: u8,
}

/// Per-arm success/failure counts; arm `i` has posterior Beta(S_i+1, F_i+1).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PosteriorState {
    successes: Vec<u64>,
    failures: Vec<u64>,
}

impl PosteriorState {
    pub fn new(arms: usize) -> Self {
        Self {
            successes: vec![0; arms],
            failures: vec![0; arms],
        }
    }

    pub fn from_counts(successes: Vec<u64>, failures: Vec<u64>) -> Self {
        assert_eq!(successes.len(), failures.len(), "counter lengths differ");
        Self { successes, failures }
    }

    /// Applies one binary outcome to `arm`.
    pub fn update(&mut self, arm: usize, outcome: u8) {
        if outcome == 1 {
            self.successes[arm] += 1;
        } else {
            self.failures[arm] += 1;
        }
    }

    pub fn arms(&self) -> usize {
        self.successes.len()
    }

    pub fn successes(&self) -> &[u64] {
        &self.successes
    }

    pub fn failures(&self) -> &[u64] {
        &self.failures
    }

    /// Number of feedback events applied to `arm`.
    pub fn observations(&self, arm: usize) -> u64 {
        self.successes[arm] + self.failures[arm]
    }
}
