use crate::Real;

use super::{binomial_cdf, binomial_sf, check_probability, BinomialParams, NumericsError};

/// Which binomial tail inequality to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TailSide {
    /// `F_{n,p}(np − nδ) ≤ e^{−2nδ²}`
    Lower,
    /// `1 − F_{n,p}(np + nδ) ≤ e^{−2nδ²}`
    Upper,
    /// `1 − F_{n+1,p}(np + nδ) ≤ e^{4δ} e^{−2nδ²}`
    UpperShifted,
}

impl TailSide {
    pub const ALL: [TailSide; 3] = [TailSide::Lower, TailSide::Upper, TailSide::UpperShifted];

    pub fn name(self) -> &'static str {
        match self {
            TailSide::Lower => "lower",
            TailSide::Upper => "upper",
            TailSide::UpperShifted => "upper_shifted",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailBoundQuery<T> {
    pub n: u64,
    pub p: T,
    pub delta: T,
    pub side: TailSide,
}

/// Chernoff–Hoeffding bound for the selected tail.
pub fn chernoff_tail_bound<T: Real>(q: TailBoundQuery<T>) -> T {
    let n = T::from_count(q.n);
    let two = T::lit(2.0);
    let base = -two * n * q.delta * q.delta;
    match q.side {
        TailSide::Lower | TailSide::Upper => base.exp(),
        TailSide::UpperShifted => (T::lit(4.0) * q.delta + base).exp(),
    }
}

/// `⌊x⌋` that forgives rounding just below an integer.
fn floor_tolerant<T: Real>(x: T) -> i64 {
    let fuzz = T::lit(1e-9) * x.abs().max(T::one());
    (x + fuzz).floor().to_i64().unwrap_or(i64::MIN)
}

/// Exact probability of the tail event bounded by [`chernoff_tail_bound`].
pub fn exact_tail<T: Real>(q: TailBoundQuery<T>) -> Result<T, NumericsError> {
    check_probability("p", q.p)?;
    if !(q.delta >= T::zero()) {
        return Err(NumericsError::Domain(format!("delta must be >= 0, got {}", q.delta)));
    }
    let n = T::from_count(q.n);
    let params = BinomialParams { n: q.n, p: q.p };
    match q.side {
        TailSide::Lower => binomial_cdf(params, floor_tolerant(n * q.p - n * q.delta)),
        TailSide::Upper => binomial_sf(params, floor_tolerant(n * q.p + n * q.delta)),
        TailSide::UpperShifted => binomial_sf(
            BinomialParams { n: q.n + 1, p: q.p },
            floor_tolerant(n * q.p + n * q.delta),
        ),
    }
}
