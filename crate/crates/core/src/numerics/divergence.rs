use crate::{MaybeInfinite, Real};

/// `a ln(a/b)` with `0 ln(0/b) = 0`.
fn entropy_term<T: Real>(a: T, b: T) -> MaybeInfinite<T> {
    if a == T::zero() {
        MaybeInfinite::finite(T::zero())
    } else if b == T::zero() {
        MaybeInfinite::infinity()
    } else {
        MaybeInfinite::finite(a * (a / b).ln())
    }
}

/// Bernoulli relative entropy `D(y‖μ) = y ln(y/μ) + (1−y) ln((1−y)/(1−μ))`.
///
/// Infinite, and flagged, when `y > 0 = μ` or `y < 1 = μ`. Arguments outside
/// `[0, 1]` yield NaN.
pub fn kl_bernoulli<T: Real>(y: T, mu: T) -> MaybeInfinite<T> {
    let unit = |v: T| v >= T::zero() && v <= T::one();
    if !unit(y) || !unit(mu) {
        return MaybeInfinite::finite(T::nan());
    }
    let a = entropy_term(y, mu);
    let b = entropy_term(T::one() - y, T::one() - mu);
    if a.infinite || b.infinite {
        return MaybeInfinite::infinity();
    }
    // Tiny negative values only come from rounding.
    MaybeInfinite::finite((a.value + b.value).max(T::zero()))
}
