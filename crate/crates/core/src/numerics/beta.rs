//! Beta distribution at integer shapes.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::Real;

use super::binomial::binomial_sf;
use super::{check_probability, BetaParams, BinomialParams, NumericsError};

/// Largest `α + β` accepted by [`sample_beta_order_statistic`].
pub const ORDER_STATISTIC_MAX_SHAPE_SUM: u64 = 64;

/// Beta(α, β) CDF at `y` for integer shapes.
///
/// Uses `F_{α,β}(y) = 1 − F^B_{α+β−1, y}(α − 1)`: the α-th smallest of α+β−1
/// uniforms is below `y` exactly when at least α of them are.
pub fn beta_cdf<T: Real>(params: BetaParams, y: T) -> Result<T, NumericsError> {
    check_probability("y", y)?;
    let n = params.alpha() + params.beta() - 1;
    binomial_sf(BinomialParams { n, p: y }, params.alpha() as i64 - 1)
}

/// Beta(α, β) CDF by adaptive Gauss–Kronrod quadrature of the density.
///
/// Independent of [`beta_cdf`]: no binomial kernel and no gamma function. The
/// density is rescaled to peak at 1 and the normalizing constant comes from the
/// same quadrature over the complement.
pub fn beta_cdf_oracle<T: Real>(params: BetaParams, y: T) -> Result<T, NumericsError> {
    check_probability("y", y)?;
    if y == T::zero() {
        return Ok(T::zero());
    }
    if y == T::one() {
        return Ok(T::one());
    }
    let density = ScaledDensity::<T>::new(params);
    let tol = T::lit(1e-15).max(T::epsilon() * T::lit(8.0));
    let left = adaptive_gk(&|x| density.eval(x), T::zero(), y, tol, 0);
    let right = adaptive_gk(&|x| density.eval(x), y, T::one(), tol, 0);
    Ok(left / (left + right))
}

/// Unnormalized Beta density divided by its value at the mode.
struct ScaledDensity<T> {
    a1: T,
    b1: T,
    mode: T,
}

impl<T: Real> ScaledDensity<T> {
    fn new(params: BetaParams) -> Self {
        let a1 = T::from_count(params.alpha() - 1);
        let b1 = T::from_count(params.beta() - 1);
        let mode = if a1 + b1 == T::zero() {
            T::lit(0.5)
        } else {
            a1 / (a1 + b1)
        };
        Self { a1, b1, mode }
    }

    fn eval(&self, x: T) -> T {
        let mut log = T::zero();
        if self.a1 > T::zero() {
            log = log + self.a1 * (x / self.mode).ln();
        }
        if self.b1 > T::zero() {
            log = log + self.b1 * ((T::one() - x) / (T::one() - self.mode)).ln();
        }
        log.exp()
    }
}

#[allow(clippy::excessive_precision)]
const KRONROD_NODES: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
#[allow(clippy::excessive_precision)]
const KRONROD_WEIGHTS: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
#[allow(clippy::excessive_precision)]
const GAUSS_WEIGHTS: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

const MAX_DEPTH: u32 = 30;

/// Returns the (Kronrod, Gauss) pair over `[a, b]`.
fn gauss_kronrod<T: Real>(f: &impl Fn(T) -> T, a: T, b: T) -> (T, T) {
    let half = T::lit(0.5);
    let center = half * (a + b);
    let radius = half * (b - a);
    let fc = f(center);
    let mut kronrod = fc * T::lit(KRONROD_WEIGHTS[7]);
    let mut gauss = fc * T::lit(GAUSS_WEIGHTS[3]);
    for i in 0..7 {
        let dx = radius * T::lit(KRONROD_NODES[i]);
        let pair = f(center - dx) + f(center + dx);
        kronrod = kronrod + pair * T::lit(KRONROD_WEIGHTS[i]);
        if i % 2 == 1 {
            gauss = gauss + pair * T::lit(GAUSS_WEIGHTS[i / 2]);
        }
    }
    (kronrod * radius, gauss * radius)
}

fn adaptive_gk<T: Real>(f: &impl Fn(T) -> T, a: T, b: T, tol: T, depth: u32) -> T {
    let (k, g) = gauss_kronrod(f, a, b);
    // Below ~100 ulps of the piece the estimate is round-off, not truncation.
    let floor = T::lit(100.0) * T::epsilon() * k.abs();
    if (k - g).abs() <= tol.max(floor) || depth >= MAX_DEPTH {
        return k;
    }
    let mid = T::lit(0.5) * (a + b);
    adaptive_gk(f, a, mid, tol * T::lit(0.5), depth + 1) + adaptive_gk(f, mid, b, tol * T::lit(0.5), depth + 1)
}

/// Draws from Beta(α, β) as `G_α / (G_α + G_β)` with Marsaglia–Tsang gammas.
pub fn sample_beta<R: Rng + ?Sized>(params: BetaParams, rng: &mut R) -> f64 {
    let x = sample_gamma(params.alpha() as f64, rng);
    let y = sample_gamma(params.beta() as f64, rng);
    x / (x + y)
}

/// Gamma(shape, 1) for `shape ≥ 1`.
fn sample_gamma<R: Rng + ?Sized>(shape: f64, rng: &mut R) -> f64 {
    let d = shape - 1.0 / 3.0;
    let c = (9.0 * d).sqrt().recip();
    loop {
        let z: f64 = rng.sample(StandardNormal);
        let v = 1.0 + c * z;
        if v <= 0.0 {
            continue;
        }
        let v = v * v * v;
        let u: f64 = rng.random();
        let z2 = z * z;
        if u < 1.0 - 0.0331 * z2 * z2 {
            return d * v;
        }
        if u.ln() < 0.5 * z2 + d * (1.0 - v + v.ln()) {
            return d * v;
        }
    }
}

/// Draws from Beta(α, β) as the α-th smallest of α+β−1 uniforms.
///
/// Slow and only defined for `α + β ≤ 64`; it exists as a distributional
/// reference for [`sample_beta`].
pub fn sample_beta_order_statistic<R: Rng + ?Sized>(params: BetaParams, rng: &mut R) -> Result<f64, NumericsError> {
    let total = params.alpha() + params.beta();
    if total > ORDER_STATISTIC_MAX_SHAPE_SUM {
        return Err(NumericsError::Domain(format!(
            "order-statistic sampler needs alpha + beta <= {ORDER_STATISTIC_MAX_SHAPE_SUM}, got {total}"
        )));
    }
    let m = (total - 1) as usize;
    let mut buf = [0.0f64; ORDER_STATISTIC_MAX_SHAPE_SUM as usize];
    let draws = &mut buf[..m];
    for u in draws.iter_mut() {
        *u = rng.random();
    }
    let idx = params.alpha() as usize - 1;
    let (_, nth, _) = draws.select_nth_unstable_by(idx, f64::total_cmp);
    Ok(*nth)
}
