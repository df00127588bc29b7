//! Closed-form regret bounds evaluated as functions of the horizon.
//!
//! Horizons are real so that curves can be sampled anywhere (e.g. at `T = e`
//! where `ln T = 1`). Gap vectors list only suboptimal arms.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::numerics::kl_bernoulli;
use crate::Real;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BoundError {
    #[error("{kind}: gap of arm {arm} is {value}, must lie in (0, 1]")]
    InvalidGap { kind: BoundKind, arm: usize, value: f64 },
    #[error("{kind}: {message}")]
    Domain { kind: BoundKind, message: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BoundKind {
    /// Two arms: `40 ln T/Δ + 48/Δ³ + 18Δ`.
    Thm1,
    /// N arms, explicit constant chain.
    Thm2Appendix,
    /// `c (Δ_max/Δ_min³)(Σ 1/Δ_a²) ln T`, constant unknown.
    Remark1Shape,
    /// `Σ Δ_i / D(μ_i‖μ*) · ln T`, main term only.
    LaiRobbinsLower,
    /// `8 Σ (1/Δ_i) ln T + (1 + π²/3) Σ Δ_i`.
    Ucb1Auer,
    /// Two arms, plays of the suboptimal arm: `40 ln T/Δ² + 48/Δ⁴ + 18`.
    Eq1PlayCount,
}

impl BoundKind {
    pub const ALL: [BoundKind; 6] = [
        BoundKind::Thm1,
        BoundKind::Thm2Appendix,
        BoundKind::Remark1Shape,
        BoundKind::LaiRobbinsLower,
        BoundKind::Ucb1Auer,
        BoundKind::Eq1PlayCount,
    ];

    pub fn name(self) -> &'static str {
        match self {
            BoundKind::Thm1 => "thm1",
            BoundKind::Thm2Appendix => "thm2_appendix",
            BoundKind::Remark1Shape => "remark1_shape",
            BoundKind::LaiRobbinsLower => "lai_robbins_lower",
            BoundKind::Ucb1Auer => "ucb1_auer",
            BoundKind::Eq1PlayCount => "eq1_play_count",
        }
    }

    /// Tag emitted next to every value of this kind.
    pub fn label(self) -> &'static str {
        match self {
            BoundKind::Remark1Shape => "shape-only",
            BoundKind::LaiRobbinsLower => "asymptotic",
            BoundKind::Eq1PlayCount => "play_count_upper_bound",
            _ => "upper_bound",
        }
    }
}

impl fmt::Display for BoundKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BoundKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        BoundKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| format!("unknown bound kind `{s}`"))
    }
}

fn check_gaps<T: Real>(kind: BoundKind, gaps: &[T]) -> Result<(), BoundError> {
    if gaps.is_empty() {
        return Err(BoundError::Domain {
            kind,
            message: "needs at least one suboptimal arm".into(),
        });
    }
    for (arm, &g) in gaps.iter().enumerate() {
        if !(g > T::zero() && g <= T::one()) {
            return Err(BoundError::InvalidGap {
                kind,
                arm,
                value: g.to_f64().unwrap_or(f64::NAN),
            });
        }
    }
    Ok(())
}

fn check_horizon<T: Real>(kind: BoundKind, horizon: T, min: f64) -> Result<T, BoundError> {
    if horizon >= T::lit(min) {
        Ok(horizon.ln())
    } else {
        Err(BoundError::Domain {
            kind,
            message: format!("horizon must be >= {min}, got {horizon}"),
        })
    }
}

/// Bound on `E[k₂(T)]` for two arms with gap `Δ`.
pub fn eq1_play_count_bound<T: Real>(horizon: T, delta: T) -> Result<T, BoundError> {
    let kind = BoundKind::Eq1PlayCount;
    check_gaps(kind, &[delta])?;
    let log_t = check_horizon(kind, horizon, 2.0)?;
    let d2 = delta * delta;
    Ok(T::lit(40.0) * log_t / d2 + T::lit(48.0) / (d2 * d2) + T::lit(18.0))
}

/// Two-arm regret bound; by construction exactly `Δ · E[k₂(T)]` bound.
pub fn thm1_bound<T: Real>(horizon: T, delta: T) -> Result<T, BoundError> {
    eq1_play_count_bound(horizon, delta)
        .map(|k| delta * k)
        .map_err(|e| match e {
            BoundError::InvalidGap { arm, value, .. } => BoundError::InvalidGap {
                kind: BoundKind::Thm1,
                arm,
                value,
            },
            BoundError::Domain { message, .. } => BoundError::Domain {
                kind: BoundKind::Thm1,
                message,
            },
        })
}

/// The pieces of the N-arm bound, for inspection.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Thm2Terms<T> {
    /// `1152 ln T (Σ 1/Δ²)²`
    pub leading: T,
    /// `288 ln T Σ 1/Δ² + 48 ln T Σ 1/Δ + 192 N Σ 1/Δ² + 96(N−1) + 8(N−1)`
    pub saturated_rest: T,
    /// `24 ln T Σ 1/Δ`
    pub unsaturated: T,
}

impl<T: Real> Thm2Terms<T> {
    pub fn total(&self) -> T {
        self.leading + self.saturated_rest + self.unsaturated
    }
}

pub fn thm2_terms<T: Real>(horizon: T, gaps: &[T]) -> Result<Thm2Terms<T>, BoundError> {
    let kind = BoundKind::Thm2Appendix;
    check_gaps(kind, gaps)?;
    let log_t = check_horizon(kind, horizon, 1.0)?;
    let arms = T::from_usize(gaps.len() + 1).unwrap();
    let others = arms - T::one();
    let inv: T = gaps.iter().fold(T::zero(), |acc, &g| acc + g.recip());
    let inv_sq: T = gaps.iter().fold(T::zero(), |acc, &g| acc + (g * g).recip());
    Ok(Thm2Terms {
        leading: T::lit(1152.0) * log_t * inv_sq * inv_sq,
        saturated_rest: T::lit(288.0) * log_t * inv_sq
            + T::lit(48.0) * log_t * inv
            + T::lit(192.0) * arms * inv_sq
            + T::lit(96.0) * others
            + T::lit(8.0) * others,
        unsaturated: T::lit(24.0) * log_t * inv,
    })
}

/// N-arm regret bound with explicit constants.
pub fn thm2_bound<T: Real>(horizon: T, gaps: &[T]) -> Result<T, BoundError> {
    thm2_terms(horizon, gaps).map(|t| t.total())
}

/// Shape of the alternative N-arm bound; `c` is caller supplied.
pub fn remark1_bound<T: Real>(horizon: T, gaps: &[T], c: T) -> Result<T, BoundError> {
    let kind = BoundKind::Remark1Shape;
    check_gaps(kind, gaps)?;
    if !(c > T::zero()) {
        return Err(BoundError::Domain {
            kind,
            message: format!("constant must be > 0, got {c}"),
        });
    }
    let log_t = check_horizon(kind, horizon, 1.0)?;
    let max = gaps.iter().copied().fold(T::zero(), T::max);
    let min = gaps.iter().copied().fold(T::infinity(), T::min);
    let inv_sq: T = gaps.iter().fold(T::zero(), |acc, &g| acc + (g * g).recip());
    Ok(c * max / (min * min * min) * inv_sq * log_t)
}

/// Main term of the asymptotic lower bound; the `o(1)` correction is dropped.
pub fn lai_robbins_lower<T: Real>(horizon: T, means: &[T]) -> Result<T, BoundError> {
    let kind = BoundKind::LaiRobbinsLower;
    if means.len() < 2 {
        return Err(BoundError::Domain {
            kind,
            message: "needs at least two arms".into(),
        });
    }
    if let Some((arm, m)) = means
        .iter()
        .enumerate()
        .find(|(_, m)| !(**m > T::zero() && **m < T::one()))
    {
        return Err(BoundError::Domain {
            kind,
            message: format!("mean of arm {arm} is {m}, must lie in (0, 1)"),
        });
    }
    let log_t = check_horizon(kind, horizon, 1.0)?;
    let best = means.iter().copied().fold(T::neg_infinity(), T::max);
    let optimal: Vec<usize> = (0..means.len()).filter(|&i| means[i] == best).collect();
    if optimal.len() > 1 {
        return Err(BoundError::Domain {
            kind,
            message: format!("arms {} and {} share the maximum mean {best}", optimal[0], optimal[1]),
        });
    }
    let mut sum = T::zero();
    for &m in means.iter().filter(|&&m| m != best) {
        // Both arguments lie strictly inside (0, 1), so the divergence is finite.
        sum = sum + (best - m) / kl_bernoulli(m, best).value;
    }
    Ok(sum * log_t)
}

/// Finite-time UCB1 regret bound.
pub fn ucb1_auer_bound<T: Real>(horizon: T, gaps: &[T]) -> Result<T, BoundError> {
    let kind = BoundKind::Ucb1Auer;
    check_gaps(kind, gaps)?;
    let log_t = check_horizon(kind, horizon, 1.0)?;
    let inv: T = gaps.iter().fold(T::zero(), |acc, &g| acc + g.recip());
    let total: T = gaps.iter().fold(T::zero(), |acc, &g| acc + g);
    let pi = T::PI();
    Ok(T::lit(8.0) * inv * log_t + (T::one() + pi * pi / T::lit(3.0)) * total)
}

/// A bound kind together with the instance data it needs.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundSpec<T> {
    pub kind: BoundKind,
    /// Arm means, including the optimal arm.
    pub means: Vec<T>,
    /// Scale of the shape-only curve; defaults to 1.
    pub constant: Option<T>,
}

/// Sampled bound values.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundCurve<T> {
    pub kind: BoundKind,
    pub label: &'static str,
    pub points: Vec<(T, T)>,
}

impl<T: Real> BoundSpec<T> {
    pub fn new(kind: BoundKind, means: Vec<T>) -> Self {
        Self {
            kind,
            means,
            constant: None,
        }
    }

    /// Suboptimal gaps `μ* − μ_i`; arms tying the optimum are rejected.
    pub fn gaps(&self) -> Result<Vec<T>, BoundError> {
        let best = self.means.iter().copied().fold(T::neg_infinity(), T::max);
        let best_arm = self.means.iter().position(|&m| m == best);
        let mut gaps = Vec::with_capacity(self.means.len().saturating_sub(1));
        for (arm, &m) in self.means.iter().enumerate() {
            if Some(arm) == best_arm {
                continue;
            }
            let g = best - m;
            if !(g > T::zero() && g <= T::one()) {
                return Err(BoundError::InvalidGap {
                    kind: self.kind,
                    arm,
                    value: g.to_f64().unwrap_or(f64::NAN),
                });
            }
            gaps.push(g);
        }
        Ok(gaps)
    }

    pub fn evaluate_at(&self, horizon: T) -> Result<T, BoundError> {
        match self.kind {
            BoundKind::LaiRobbinsLower => lai_robbins_lower(horizon, &self.means),
            BoundKind::Thm1 | BoundKind::Eq1PlayCount => {
                let gaps = self.gaps()?;
                if gaps.len() != 1 {
                    return Err(BoundError::Domain {
                        kind: self.kind,
                        message: format!("defined for two arms, got {}", gaps.len() + 1),
                    });
                }
                if self.kind == BoundKind::Thm1 {
                    thm1_bound(horizon, gaps[0])
                } else {
                    eq1_play_count_bound(horizon, gaps[0])
                }
            }
            BoundKind::Thm2Appendix => thm2_bound(horizon, &self.gaps()?),
            BoundKind::Remark1Shape => remark1_bound(horizon, &self.gaps()?, self.constant.unwrap_or(T::one())),
            BoundKind::Ucb1Auer => ucb1_auer_bound(horizon, &self.gaps()?),
        }
    }

    pub fn curve(&self, horizons: &[T]) -> Result<BoundCurve<T>, BoundError> {
        let points = horizons
            .iter()
            .map(|&h| self.evaluate_at(h).map(|v| (h, v)))
            .collect::<Result<_, _>>()?;
        Ok(BoundCurve {
            kind: self.kind,
            label: self.kind.label(),
            points,
        })
    }
}
