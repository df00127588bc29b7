//! Binomial probability kernels.
//!
//! Point masses use the saddle-point form (Stirling error plus deviance) so
//! they keep full relative precision for any `n`. The CDF is a tail sum anchored
//! at one such mass and extended by the ratio recurrence for `n` up to
//! [`SUMMATION_LIMIT`]; above that it switches to the continued fraction of the
//! regularized incomplete beta function, whose prefactor is again a point mass.

use crate::Real;

use super::{BinomialParams, NumericsError};

/// Largest `n` served by direct tail summation.
pub const SUMMATION_LIMIT: u64 = 10_000;

const MAX_CF_ITERATIONS: usize = 200_000;

/// `ln Γ(n+1) − (n+½)ln n + n − ln √(2π)` for `n = 0..=15`.
#[allow(clippy::excessive_precision)]
const STIRLING_ERROR_TABLE: [f64; 16] = [
    0.0,
    0.081_061_466_795_327_258_219_67,
    0.041_340_695_955_409_294_093_82,
    0.027_677_925_684_998_339_148_79,
    0.020_790_672_103_765_093_111_52,
    0.016_644_691_189_821_192_163_19,
    0.013_876_128_823_070_747_998_75,
    0.011_896_709_945_891_770_095_06,
    0.010_411_265_261_972_096_497_48,
    0.009_255_462_182_712_732_917_729,
    0.008_330_563_433_362_871_256_469,
    0.007_573_675_487_951_840_794_972,
    0.006_942_840_107_209_529_865_664,
    0.006_408_994_188_004_207_068_44,
    0.005_951_370_112_758_847_735_624,
    0.005_554_733_551_962_801_371_039,
];

fn stirling_error<T: Real>(n: u64) -> T {
    if n < STIRLING_ERROR_TABLE.len() as u64 {
        return T::lit(STIRLING_ERROR_TABLE[n as usize]);
    }
    let s0 = T::lit(1.0 / 12.0);
    let s1 = T::lit(1.0 / 360.0);
    let s2 = T::lit(1.0 / 1260.0);
    let s3 = T::lit(1.0 / 1680.0);
    let s4 = T::lit(1.0 / 1188.0);
    let x = T::from_count(n);
    let xx = x * x;
    if n > 500 {
        (s0 - s1 / xx) / x
    } else if n > 80 {
        (s0 - (s1 - s2 / xx) / xx) / x
    } else if n > 35 {
        (s0 - (s1 - (s2 - s3 / xx) / xx) / xx) / x
    } else {
        (s0 - (s1 - (s2 - (s3 - s4 / xx) / xx) / xx) / xx) / x
    }
}

/// Deviance term `x ln(x/m) + m − x`, accurate when `x ≈ m`.
fn deviance<T: Real>(x: T, m: T) -> T {
    let ten = T::lit(0.1);
    if (x - m).abs() < ten * (x + m) {
        let mut v = (x - m) / (x + m);
        let mut s = (x - m) * v;
        let mut ej = (x + x) * v;
        v = v * v;
        let mut j = 1u32;
        loop {
            ej = ej * v;
            let s1 = s + ej / T::from_u32(2 * j + 1).unwrap();
            if s1 == s {
                return s1;
            }
            s = s1;
            j += 1;
            if j > 1000 {
                return s;
            }
        }
    }
    x * (x / m).ln() + m - x
}

/// `Pr(X = k)` for `X ~ Binomial(n, p)` with `q = 1 − p` supplied separately.
pub(crate) fn pmf_pq<T: Real>(k: u64, n: u64, p: T, q: T) -> T {
    if k > n {
        return T::zero();
    }
    if p == T::zero() {
        return if k == 0 { T::one() } else { T::zero() };
    }
    if q == T::zero() {
        return if k == n { T::one() } else { T::zero() };
    }
    let nn = T::from_count(n);
    let small = T::lit(0.1);
    if k == 0 {
        if n == 0 {
            return T::one();
        }
        let lc = if p < small {
            -deviance(nn, nn * q) - nn * p
        } else {
            nn * q.ln()
        };
        return lc.exp();
    }
    if k == n {
        let lc = if q < small {
            -deviance(nn, nn * p) - nn * q
        } else {
            nn * p.ln()
        };
        return lc.exp();
    }
    let x = T::from_count(k);
    let lc = stirling_error::<T>(n)
        - stirling_error::<T>(k)
        - stirling_error::<T>(n - k)
        - deviance(x, nn * p)
        - deviance(nn - x, nn * q);
    let lf = T::lit(std::f64::consts::TAU.ln()) + x.ln() + (-x / nn).ln_1p();
    (lc - T::lit(0.5) * lf).exp()
}

/// Binomial point mass `Pr(X = k)`.
pub fn binomial_pmf<T: Real>(params: BinomialParams<T>, k: i64) -> T {
    if k < 0 {
        return T::zero();
    }
    pmf_pq(k as u64, params.n, params.p, T::one() - params.p)
}

/// `Pr(X ≤ k)` for `X ~ Binomial(n, p)`.
pub fn binomial_cdf<T: Real>(params: BinomialParams<T>, k: i64) -> Result<T, NumericsError> {
    params.validate()?;
    let BinomialParams { n, p } = params;
    if k < 0 {
        return Ok(T::zero());
    }
    let k = k as u64;
    if k >= n {
        return Ok(T::one());
    }
    if p == T::zero() {
        return Ok(T::one());
    }
    if p == T::one() {
        return Ok(T::zero());
    }
    if n <= SUMMATION_LIMIT {
        Ok(cdf_by_summation(n, p, k))
    } else {
        Ok(cdf_by_continued_fraction(n, p, k))
    }
}

/// `Pr(X > k)`, computed without cancellation in the upper tail.
pub fn binomial_sf<T: Real>(params: BinomialParams<T>, k: i64) -> Result<T, NumericsError> {
    params.validate()?;
    let BinomialParams { n, p } = params;
    if k < 0 {
        return Ok(T::one());
    }
    let k = k as u64;
    if k >= n {
        return Ok(T::zero());
    }
    if p == T::zero() {
        return Ok(T::zero());
    }
    if p == T::one() {
        return Ok(T::one());
    }
    let q = T::one() - p;
    if n <= SUMMATION_LIMIT {
        let mode = mode(n, p);
        if k >= mode {
            Ok(upper_tail_sum(n, p, q, k + 1).min(T::one()))
        } else {
            Ok((T::one() - lower_tail_sum(n, p, q, k)).max(T::zero()))
        }
    } else {
        // Pr(X > k) = I_p(k+1, n−k)
        Ok(regularized_beta_integer(k + 1, n - k, p, q))
    }
}

fn mode<T: Real>(n: u64, p: T) -> u64 {
    let m = (T::from_count(n + 1) * p).floor().to_u64().unwrap_or(0);
    m.min(n)
}

/// Direct summation route, exposed for cross-validation against the
/// continued fraction.
pub fn binomial_cdf_summation<T: Real>(params: BinomialParams<T>, k: i64) -> Result<T, NumericsError> {
    params.validate()?;
    let BinomialParams { n, p } = params;
    if k < 0 {
        return Ok(T::zero());
    }
    if k as u64 >= n || p == T::zero() {
        return Ok(T::one());
    }
    if p == T::one() {
        return Ok(T::zero());
    }
    Ok(cdf_by_summation(n, p, k as u64))
}

/// Continued-fraction route, exposed for cross-validation.
pub fn binomial_cdf_continued_fraction<T: Real>(params: BinomialParams<T>, k: i64) -> Result<T, NumericsError> {
    params.validate()?;
    let BinomialParams { n, p } = params;
    if k < 0 {
        return Ok(T::zero());
    }
    if k as u64 >= n || p == T::zero() {
        return Ok(T::one());
    }
    if p == T::one() {
        return Ok(T::zero());
    }
    Ok(cdf_by_continued_fraction(n, p, k as u64))
}

fn cdf_by_summation<T: Real>(n: u64, p: T, k: u64) -> T {
    let q = T::one() - p;
    if k < mode(n, p) {
        lower_tail_sum(n, p, q, k).min(T::one())
    } else {
        (T::one() - upper_tail_sum(n, p, q, k + 1)).max(T::zero())
    }
}

/// `Σ_{i ≤ k} Pr(X = i)`, walking down from `k` (terms shrink below the mode).
fn lower_tail_sum<T: Real>(n: u64, p: T, q: T, k: u64) -> T {
    let mut term = pmf_pq(k, n, p, q);
    let mut sum = term;
    let ratio = q / p;
    let cutoff = T::epsilon() * T::lit(1e-3);
    let mut i = k;
    while i > 0 && term > T::zero() {
        term = term * T::from_count(i) / T::from_count(n - i + 1) * ratio;
        sum = sum + term;
        if term <= sum * cutoff {
            break;
        }
        i -= 1;
    }
    sum
}

/// `Σ_{i ≥ from} Pr(X = i)`, walking up from `from`.
fn upper_tail_sum<T: Real>(n: u64, p: T, q: T, from: u64) -> T {
    if from > n {
        return T::zero();
    }
    let mut term = pmf_pq(from, n, p, q);
    let mut sum = term;
    let ratio = p / q;
    let cutoff = T::epsilon() * T::lit(1e-3);
    let mut i = from;
    while i < n && term > T::zero() {
        term = term * T::from_count(n - i) / T::from_count(i + 1) * ratio;
        sum = sum + term;
        if term <= sum * cutoff {
            break;
        }
        i += 1;
    }
    sum
}

fn cdf_by_continued_fraction<T: Real>(n: u64, p: T, k: u64) -> T {
    // Pr(X ≤ k) = I_q(n−k, k+1)
    let q = T::one() - p;
    regularized_beta_integer(n - k, k + 1, q, p)
}

/// `I_x(a, b)` for integer shapes with `y = 1 − x` passed separately.
fn regularized_beta_integer<T: Real>(a: u64, b: u64, x: T, y: T) -> T {
    let af = T::from_count(a);
    let bf = T::from_count(b);
    if x < (af + T::one()) / (af + bf + T::lit(2.0)) {
        (prefactor(a, b, x, y) * beta_continued_fraction(af, bf, x)).min(T::one())
    } else {
        let rev = prefactor(b, a, y, x) * beta_continued_fraction(bf, af, y);
        (T::one() - rev).max(T::zero())
    }
}

/// `x^a y^b / (a B(a,b)) = y · Pr(Binomial(a+b−1, x) = a)`.
fn prefactor<T: Real>(a: u64, b: u64, x: T, y: T) -> T {
    y * pmf_pq(a, a + b - 1, x, y)
}

/// Modified Lentz evaluation of the incomplete beta continued fraction.
fn beta_continued_fraction<T: Real>(a: T, b: T, x: T) -> T {
    let tiny = T::min_positive_value() / T::epsilon();
    let eps = T::epsilon();
    let one = T::one();
    let qab = a + b;
    let qap = a + one;
    let qam = a - one;
    let mut c = one;
    let mut d = one - qab * x / qap;
    if d.abs() < tiny {
        d = tiny;
    }
    d = d.recip();
    let mut h = d;
    for m in 1..=MAX_CF_ITERATIONS {
        let m = T::from_usize(m).unwrap();
        let m2 = m + m;
        let aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = one + aa * d;
        if d.abs() < tiny {
            d = tiny;
        }
        c = one + aa / c;
        if c.abs() < tiny {
            c = tiny;
        }
        d = d.recip();
        h = h * d * c;
        let aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = one + aa * d;
        if d.abs() < tiny {
            d = tiny;
        }
        c = one + aa / c;
        if c.abs() < tiny {
            c = tiny;
        }
        d = d.recip();
        let del = d * c;
        h = h * del;
        if (del - one).abs() <= eps {
            break;
        }
    }
    h
}

/// A median of `Binomial(n, p)`: `Pr(X ≤ m) ≥ ½` and `Pr(X ≥ m) ≥ ½`, with
/// `m ∈ {⌊np⌋, ⌈np⌉}`.
pub fn binomial_median<T: Real>(params: BinomialParams<T>) -> Result<u64, NumericsError> {
    params.validate()?;
    let np = T::from_count(params.n) * params.p;
    let lo = np.floor().to_u64().unwrap_or(0);
    let hi = np.ceil().to_u64().unwrap_or(0).min(params.n);
    let half = T::lit(0.5);
    for m in [lo, hi] {
        let below = binomial_cdf(params, m as i64)?;
        let above = binomial_sf(params, m as i64 - 1)?;
        if below >= half && above >= half {
            return Ok(m);
        }
    }
    // Rounding in np can only move us off by one; pick the closer candidate.
    let below_lo = binomial_cdf(params, lo as i64)?;
    Ok(if below_lo >= half { lo } else { hi })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bin(n: u64, p: f64) -> BinomialParams<f64> {
        BinomialParams::new(n, p).unwrap()
    }

    fn exact_cdf(n: u64, p: f64, k: i64) -> f64 {
        // Pascal-triangle coefficients in f64 are exact enough for n ≤ 60.
        let mut total = 0.0;
        for i in 0..=k.min(n as i64) {
            let mut c = 1.0f64;
            for j in 0..i as u64 {
                c = c * (n - j) as f64 / (j + 1) as f64;
            }
            total += c * p.powi(i as i32) * (1.0 - p).powi((n as i64 - i) as i32);
        }
        total
    }

    #[test]
    fn cdf_examples() {
        assert!((binomial_cdf(bin(1, 0.3), 0).unwrap() - 0.7).abs() < 1e-15);
        assert!((binomial_cdf(bin(3, 0.5), 1).unwrap() - 0.5).abs() < 1e-15);
        assert_eq!(binomial_cdf(bin(0, 0.7), 0).unwrap(), 1.0);
    }

    #[test]
    fn cdf_edges_are_exact() {
        assert_eq!(binomial_cdf(bin(10, 0.4), -1).unwrap(), 0.0);
        assert_eq!(binomial_cdf(bin(10, 0.4), 10).unwrap(), 1.0);
        assert_eq!(binomial_cdf(bin(10, 0.4), 42).unwrap(), 1.0);
        assert_eq!(binomial_cdf(bin(10, 0.0), 0).unwrap(), 1.0);
        assert_eq!(binomial_cdf(bin(10, 1.0), 9).unwrap(), 0.0);
    }

    #[test]
    fn invalid_probability_is_domain_error() {
        let bad = BinomialParams { n: 3, p: 1.5 };
        assert!(binomial_cdf(bad, 1).is_err());
        let nan = BinomialParams { n: 3, p: f64::NAN };
        assert!(binomial_cdf(nan, 1).is_err());
        assert!(BinomialParams::new(3, -0.1).is_err());
    }

    #[test]
    fn matches_enumeration_small_n() {
        for n in 0..=40u64 {
            for &p in &[0.01, 0.1, 0.3, 0.5, 0.77, 0.99] {
                for k in -1..=(n as i64 + 1) {
                    let got = binomial_cdf(bin(n, p), k).unwrap();
                    let want = if k < 0 { 0.0 } else { exact_cdf(n, p, k) };
                    assert!((got - want).abs() < 1e-13, "n={n} p={p} k={k}: {got} vs {want}");
                }
            }
        }
    }

    #[test]
    fn pmf_sums_to_one() {
        for &(n, p) in &[(1u64, 0.5), (17, 0.2), (500, 0.93), (5000, 0.5)] {
            let s: f64 = (0..=n as i64).map(|k| binomial_pmf(bin(n, p), k)).sum();
            assert!((s - 1.0).abs() < 1e-12, "n={n} p={p} sum={s}");
        }
    }

    #[test]
    fn survival_complements_cdf() {
        for &(n, p) in &[(30u64, 0.4), (2000, 0.01), (20_000, 0.6)] {
            for k in [0i64, 3, (n / 3) as i64, (n / 2) as i64, n as i64 - 1] {
                let c = binomial_cdf(bin(n, p), k).unwrap();
                let s = binomial_sf(bin(n, p), k).unwrap();
                assert!((c + s - 1.0).abs() < 1e-12, "n={n} p={p} k={k}");
            }
        }
    }

    #[test]
    fn routes_agree_on_overlap() {
        for &n in &[1_000u64, 2_500, 6_000, 10_000] {
            for &p in &[0.05, 0.3, 0.5, 0.71, 0.97] {
                let np = n as f64 * p;
                let sd = (np * (1.0 - p)).sqrt();
                for z in [-6.0, -3.0, -1.0, 0.0, 0.5, 2.0, 5.0] {
                    let k = (np + z * sd).floor() as i64;
                    let a = binomial_cdf_summation(bin(n, p), k).unwrap();
                    let b = binomial_cdf_continued_fraction(bin(n, p), k).unwrap();
                    assert!((a - b).abs() < 1e-12, "n={n} p={p} k={k}: {a} vs {b}");
                }
            }
        }
    }

    #[test]
    fn large_n_symmetry() {
        let n = 1_000_000u64;
        // Pr(X ≤ n/2 − 1) + Pr(X = n/2)/2 = 1/2 for p = 1/2 by symmetry
        let c = binomial_cdf(bin(n, 0.5), (n / 2 - 1) as i64).unwrap();
        let m = binomial_pmf(bin(n, 0.5), (n / 2) as i64);
        assert!((c + 0.5 * m - 0.5).abs() < 1e-12);
    }

    #[test]
    fn median_examples() {
        let m = binomial_median(bin(5, 0.5)).unwrap();
        assert!(m == 2 || m == 3);
        assert_eq!(binomial_median(bin(10, 0.3)).unwrap(), 3);
        assert_eq!(binomial_median(bin(7, 0.0)).unwrap(), 0);
        assert_eq!(binomial_median(bin(7, 1.0)).unwrap(), 7);
    }

    #[test]
    fn generic_over_f32() {
        let p = BinomialParams::new(3, 0.5f32).unwrap();
        assert!((binomial_cdf(p, 1).unwrap() - 0.5).abs() < 1e-6);
    }
}
