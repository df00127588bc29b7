//! Geometric threshold-crossing counts and their closed-form envelopes.
//!
//! `X(j, s, y)` counts fresh Beta(s+1, j−s+1) draws that fall at or below `y`
//! before the first one exceeds it. This is how long the optimal arm waits
//! between plays while its posterior is frozen after `j` plays with `s`
//! successes, against a competitor sampling at `y`.

use rand::Rng;

use crate::{MaybeInfinite, Real};

use super::{binomial_cdf, check_probability, kl_bernoulli, sample_beta, BetaParams, BinomialParams, NumericsError};

/// `E[X(j, s, y)] = 1 / F^B_{j+1, y}(s) − 1`.
///
/// When the crossing probability is zero (`y = 1`) the result is the flagged
/// infinity.
pub fn expected_interplay_gap<T: Real>(j: u64, s: u64, y: T) -> Result<MaybeInfinite<T>, NumericsError> {
    if s > j {
        return Err(NumericsError::Domain(format!("need s <= j, got s={s}, j={j}")));
    }
    check_probability("y", y)?;
    let crossing = binomial_cdf(BinomialParams { n: j + 1, p: y }, s as i64)?;
    if crossing == T::zero() {
        return Ok(MaybeInfinite::infinity());
    }
    Ok(MaybeInfinite::finite((crossing.recip() - T::one()).max(T::zero())))
}

/// One draw of `min{X(j, s, y), cap}`.
pub fn sample_threshold_trials<R: Rng + ?Sized>(
    j: u64,
    s: u64,
    y: f64,
    cap: u64,
    rng: &mut R,
) -> Result<u64, NumericsError> {
    if s > j {
        return Err(NumericsError::Domain(format!("need s <= j, got s={s}, j={j}")));
    }
    check_probability("y", y)?;
    let posterior = BetaParams::posterior(s, j - s);
    let mut count = 0;
    while count < cap {
        if sample_beta(posterior, rng) > y {
            break;
        }
        count += 1;
    }
    Ok(count)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Lemma3Regime {
    /// `j < (y/D) ln R`
    Small,
    /// `(y/D) ln R ≤ j < 4 ln T / Δ'²`
    Middle,
    /// `j ≥ 4 ln T / Δ'²`
    Large,
}

struct Lemma3Terms<T> {
    kl: T,
    ratio: T,
    gap: T,
    small_cut: T,
    large_cut: T,
}

fn lemma3_terms<T: Real>(y: T, mu1: T, horizon: u64) -> Result<Lemma3Terms<T>, NumericsError> {
    if !(T::zero() < y && y < mu1 && mu1 < T::one()) {
        return Err(NumericsError::Domain(format!(
            "need 0 < y < mu1 < 1, got y={y}, mu1={mu1}"
        )));
    }
    if horizon == 0 {
        return Err(NumericsError::Domain("horizon must be >= 1".into()));
    }
    let one = T::one();
    // y < mu1 strictly inside (0,1), so the divergence is finite and positive.
    let kl = kl_bernoulli(y, mu1).value;
    let ratio = mu1 * (one - y) / (y * (one - mu1));
    let gap = mu1 - y;
    Ok(Lemma3Terms {
        kl,
        ratio,
        gap,
        small_cut: y / kl * ratio.ln(),
        large_cut: T::lit(4.0) * T::from_count(horizon).ln() / (gap * gap),
    })
}

/// Which branch of the envelope applies at `j`.
///
/// Branch boundaries are compared as reals; `j` is never rounded against them.
pub fn lemma3_regime<T: Real>(j: u64, y: T, mu1: T, horizon: u64) -> Result<Lemma3Regime, NumericsError> {
    let terms = lemma3_terms(y, mu1, horizon)?;
    Ok(regime_of(T::from_count(j), &terms))
}

fn regime_of<T: Real>(j: T, terms: &Lemma3Terms<T>) -> Lemma3Regime {
    // The large-j branch is checked first: its argument does not depend on the
    // other two, and when the small-j cut exceeds it both would otherwise apply.
    if j >= terms.large_cut {
        Lemma3Regime::Large
    } else if j < terms.small_cut {
        Lemma3Regime::Small
    } else {
        Lemma3Regime::Middle
    }
}

/// Upper bound on `E[min{X(j, s(j), y), T}]` with `s(j) ~ Binomial(j, μ₁)`.
///
/// Diagnostic only; nothing in the simulator's decision path reads it.
pub fn lemma3_envelope<T: Real>(j: u64, y: T, mu1: T, horizon: u64) -> Result<T, NumericsError> {
    let terms = lemma3_terms(y, mu1, horizon)?;
    let jf = T::from_count(j);
    let one = T::one();
    let decay = (-terms.kl * jf).exp();
    let tail = mu1 / terms.gap * decay;
    Ok(match regime_of(jf, &terms) {
        Lemma3Regime::Small => one + T::lit(2.0) / (one - y) + tail,
        Lemma3Regime::Middle => one + terms.ratio.powf(y) / (one - y) * decay + tail,
        Lemma3Regime::Large => T::lit(16.0) / T::from_count(horizon),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn gap_examples() {
        let g = expected_interplay_gap(0, 0, 0.5f64).unwrap();
        assert!((g.value - 1.0).abs() < 1e-15);
        let g = expected_interplay_gap(2, 1, 0.5f64).unwrap();
        assert!((g.value - 1.0).abs() < 1e-14);
    }

    #[test]
    fn gap_at_unit_threshold_is_flagged_infinite() {
        let g = expected_interplay_gap(4, 2, 1.0f64).unwrap();
        assert!(g.infinite);
        assert!(g.value.is_infinite());
        assert!(expected_interplay_gap(4, 5, 0.5).is_err());
    }

    #[test]
    fn gap_matches_monte_carlo() {
        // Oracle: direct simulation of the geometric count.
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        let reps = 100_000u64;
        let (j, s, y) = (10, 9, 0.3);
        let draws: Vec<f64> = (0..reps)
            .map(|_| sample_threshold_trials(j, s, y, u64::MAX, &mut rng).unwrap() as f64)
            .collect();
        let mean = draws.iter().sum::<f64>() / reps as f64;
        let var = draws.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (reps - 1) as f64;
        let se = (var / reps as f64).sqrt();
        let want = expected_interplay_gap(j, s, y).unwrap().value;
        // With a ~5e-5 mean the empirical SE can be 0; allow one count of slack.
        assert!((mean - want).abs() <= 3.0 * se + 1.0 / reps as f64, "{mean} vs {want}");
    }

    #[test]
    fn envelope_regimes() {
        let (y, mu1, t) = (0.3f64, 0.6, 1000);
        assert_eq!(lemma3_regime(0, y, mu1, t).unwrap(), Lemma3Regime::Small);
        let v0 = lemma3_envelope(0, y, mu1, t).unwrap();
        assert!((v0 - (1.0 + 2.0 / 0.7 + 0.6 / 0.3)).abs() < 1e-12);
        let big = (4.0 * (t as f64).ln() / 0.09).ceil() as u64;
        assert_eq!(lemma3_regime(big, y, mu1, t).unwrap(), Lemma3Regime::Large);
        assert_eq!(lemma3_envelope(big, y, mu1, t).unwrap(), 16.0 / t as f64);
    }

    #[test]
    fn middle_regime_decreases() {
        let (y, mu1, t) = (0.55, 0.6, 10_000);
        let values: Vec<f64> = (0..20_000)
            .filter(|&j| lemma3_regime(j, y, mu1, t).unwrap() == Lemma3Regime::Middle)
            .map(|j| lemma3_envelope(j, y, mu1, t).unwrap())
            .collect();
        assert!(values.len() > 100);
        // e^{-Dj} eventually drops below one ulp of the leading 1.
        assert!(values.windows(2).all(|w| w[1] <= w[0]));
        assert!(values.windows(2).take(1000).all(|w| w[1] < w[0]));
    }

    #[test]
    fn envelope_rejects_bad_order() {
        assert!(lemma3_envelope(3, 0.6, 0.5, 10).is_err());
        assert!(lemma3_envelope(3, 0.0, 0.5, 10).is_err());
        assert!(lemma3_envelope(3, 0.2, 1.0, 10).is_err());
        assert!(lemma3_envelope(3, 0.2, 0.5, 0).is_err());
    }
}
