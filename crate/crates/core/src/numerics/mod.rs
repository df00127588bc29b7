//! Probability kernels, samplers and oracle evaluators.
//!
//! Everything here is a pure function of its arguments plus, for samplers, an
//! explicitly passed random stream.

mod beta;
mod binomial;
mod divergence;
mod geometric;
pub mod ks;
mod tails;

use rand::Rng;
use thiserror::Error;

use crate::Real;

pub use beta::{beta_cdf, beta_cdf_oracle, sample_beta, sample_beta_order_statistic, ORDER_STATISTIC_MAX_SHAPE_SUM};
pub use binomial::{
    binomial_cdf, binomial_cdf_continued_fraction, binomial_cdf_summation, binomial_median, binomial_pmf, binomial_sf,
    SUMMATION_LIMIT,
};
pub use divergence::kl_bernoulli;
pub use geometric::{expected_interplay_gap, lemma3_envelope, lemma3_regime, sample_threshold_trials, Lemma3Regime};
pub use tails::{chernoff_tail_bound, exact_tail, TailBoundQuery, TailSide};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NumericsError {
    #[error("{name} = {value} is not a probability in [0, 1]")]
    NotAProbability { name: &'static str, value: f64 },
    #[error("Beta shapes must be integers >= 1, got ({alpha}, {beta})")]
    InvalidShape { alpha: u64, beta: u64 },
    #[error("{0}")]
    Domain(String),
}

pub(crate) fn check_probability<T: Real>(name: &'static str, value: T) -> Result<(), NumericsError> {
    if value >= T::zero() && value <= T::one() {
        Ok(())
    } else {
        Err(NumericsError::NotAProbability {
            name,
            value: value.to_f64().unwrap_or(f64::NAN),
        })
    }
}

/// Binomial(n, p) parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BinomialParams<T> {
    pub n: u64,
    pub p: T,
}

impl<T: Real> BinomialParams<T> {
    pub fn new(n: u64, p: T) -> Result<Self, NumericsError> {
        let params = Self { n, p };
        params.validate()?;
        Ok(params)
    }

    pub(crate) fn validate(&self) -> Result<(), NumericsError> {
        check_probability("p", self.p)
    }
}

/// Beta(α, β) with integer shapes `α, β ≥ 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BetaParams {
    alpha: u64,
    beta: u64,
}

impl BetaParams {
    pub fn new(alpha: u64, beta: u64) -> Result<Self, NumericsError> {
        if alpha == 0 || beta == 0 {
            return Err(NumericsError::InvalidShape { alpha, beta });
        }
        Ok(Self { alpha, beta })
    }

    /// Posterior after `successes` and `failures` under the uniform prior.
    pub fn posterior(successes: u64, failures: u64) -> Self {
        Self {
            alpha: successes + 1,
            beta: failures + 1,
        }
    }

    pub fn alpha(&self) -> u64 {
        self.alpha
    }

    pub fn beta(&self) -> u64 {
        self.beta
    }

    pub fn mean(&self) -> f64 {
        self.alpha as f64 / (self.alpha + self.beta) as f64
    }
}

/// One Bernoulli(p) outcome from exactly one uniform draw.
pub fn sample_bernoulli<R: Rng + ?Sized>(p: f64, rng: &mut R) -> Result<u8, NumericsError> {
    check_probability("p", p)?;
    let u: f64 = rng.random();
    Ok(u8::from(u < p))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn bernoulli_degenerate() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..1000 {
            assert_eq!(sample_bernoulli(0.0, &mut rng).unwrap(), 0);
            assert_eq!(sample_bernoulli(1.0, &mut rng).unwrap(), 1);
        }
    }

    #[test]
    fn bernoulli_rejects_bad_p() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        assert!(sample_bernoulli(1.01, &mut rng).is_err());
        assert!(sample_bernoulli(f64::NAN, &mut rng).is_err());
    }

    #[test]
    fn bernoulli_consumes_one_draw() {
        let mut a = ChaCha8Rng::seed_from_u64(11);
        let mut b = ChaCha8Rng::seed_from_u64(11);
        sample_bernoulli(0.3, &mut a).unwrap();
        let _: f64 = b.random();
        assert_eq!(a.random::<u64>(), b.random::<u64>());
    }

    #[test]
    fn shapes_must_be_positive() {
        assert!(BetaParams::new(0, 1).is_err());
        assert!(BetaParams::new(1, 0).is_err());
        assert_eq!(BetaParams::posterior(0, 0), BetaParams::new(1, 1).unwrap());
    }
}
