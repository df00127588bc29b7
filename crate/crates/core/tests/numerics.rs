//! Numerical kernels against independent references.

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tsbandit::numerics::ks::{ks_critical_value, ks_statistic, ks_two_sample, ks_two_sample_critical_value};
use tsbandit::numerics::{
    beta_cdf, beta_cdf_oracle, binomial_cdf, binomial_median, binomial_pmf, chernoff_tail_bound, exact_tail,
    kl_bernoulli, sample_beta, sample_beta_order_statistic, BetaParams, BinomialParams, TailBoundQuery, TailSide,
};

fn beta(a: u64, b: u64) -> BetaParams {
    BetaParams::new(a, b).unwrap()
}

fn bin(n: u64, p: f64) -> BinomialParams<f64> {
    BinomialParams { n, p }
}

#[test]
fn beta_binomial_identity_on_a_coarse_grid() {
    for a in [1, 2, 3, 7, 19, 50, 99, 100] {
        for b in [1, 2, 4, 11, 33, 64, 100] {
            for i in 1..100 {
                let y = i as f64 / 100.0;
                let d: f64 = beta_cdf(beta(a, b), y).unwrap() - beta_cdf_oracle(beta(a, b), y).unwrap();
                assert!(d.abs() < 1e-10, "({a},{b},{y}): {d}");
            }
        }
    }
}

#[test]
fn binomial_cdf_matches_exact_rational_sums() {
    // Exact enumeration with rational weights for p = 1/4.
    for n in 0..=30u64 {
        let total = 4f64.powi(n as i32);
        let mut acc = 0.0;
        let mut binom = 1.0f64;
        for k in 0..=n {
            if k > 0 {
                binom = binom * (n - k + 1) as f64 / k as f64;
            }
            acc += binom * 3f64.powi((n - k) as i32) / total;
            let got = binomial_cdf(bin(n, 0.25), k as i64).unwrap();
            assert!((got - acc).abs() < 1e-13, "n={n} k={k}: {got} vs {acc}");
        }
    }
}

#[test]
fn median_brute_force() {
    for n in 0..=60u64 {
        for p in (1..=19).map(|i| i as f64 * 0.05) {
            let m = binomial_median(bin(n, p)).unwrap();
            let np = n as f64 * p;
            assert!(m == np.floor() as u64 || m == np.ceil() as u64, "n={n} p={p} m={m}");
            assert!(binomial_cdf(bin(n, p), m as i64).unwrap() >= 0.5);
            assert!(1.0 - binomial_cdf(bin(n, p), m as i64 - 1).unwrap() >= 0.5);
        }
    }
}

#[test]
fn chernoff_grid() {
    for side in TailSide::ALL {
        for n in [10u64, 50, 100, 500] {
            for p in (1..=9).map(|i| i as f64 / 10.0) {
                for delta in (1..=30).map(|i| i as f64 / 100.0) {
                    let q = TailBoundQuery { n, p, delta, side };
                    let exact = exact_tail(q).unwrap();
                    assert!(exact <= chernoff_tail_bound(q), "{q:?}: {exact}");
                }
            }
        }
    }
}

#[test]
fn sampler_passes_one_sample_ks() {
    let n = 50_000;
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for (a, b) in [(1, 1), (1, 30), (5, 2), (60, 40), (500, 20)] {
        let mut xs: Vec<f64> = (0..n).map(|_| sample_beta(beta(a, b), &mut rng)).collect();
        let d = ks_statistic(&mut xs, |y| beta_cdf(beta(a, b), y.clamp(0.0, 1.0)).unwrap());
        assert!(d < ks_critical_value(n, 1e-3), "({a},{b}): D = {d}");
    }
}

#[test]
fn sampler_agrees_with_order_statistics() {
    let n = 20_000;
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for (a, b) in [(1, 1), (3, 9), (20, 20)] {
        let mut xs: Vec<f64> = (0..n).map(|_| sample_beta(beta(a, b), &mut rng)).collect();
        let mut ys: Vec<f64> = (0..n)
            .map(|_| sample_beta_order_statistic(beta(a, b), &mut rng).unwrap())
            .collect();
        let d = ks_two_sample(&mut xs, &mut ys);
        assert!(d < ks_two_sample_critical_value(n, n, 1e-3), "({a},{b}): D = {d}");
    }
}

#[test]
fn pinsker_on_a_grid() {
    for i in 0..=100 {
        for j in 1..100 {
            let (y, mu) = (i as f64 / 100.0, j as f64 / 100.0);
            let kl = kl_bernoulli(y, mu);
            assert!(!kl.infinite);
            assert!(kl.value >= 2.0 * (y - mu).powi(2), "D({y}||{mu}) = {}", kl.value);
        }
    }
}

proptest! {
    #[test]
    fn cdf_is_a_distribution_function(n in 0u64..3000, p in 0.0f64..=1.0, k in -5i64..3005) {
        let c = binomial_cdf(bin(n, p), k).unwrap();
        let next = binomial_cdf(bin(n, p), k + 1).unwrap();
        prop_assert!((0.0..=1.0).contains(&c));
        prop_assert!(next + 1e-15 >= c);
        let step = binomial_pmf(bin(n, p), k + 1);
        prop_assert!((next - c - step).abs() < 1e-12);
    }

    #[test]
    fn beta_cdf_is_monotone(a in 1u64..200, b in 1u64..200, y in 0.0f64..1.0, dy in 0.0f64..0.1) {
        let lo = beta_cdf(beta(a, b), y).unwrap();
        let hi = beta_cdf(beta(a, b), (y + dy).min(1.0)).unwrap();
        prop_assert!(hi + 1e-15 >= lo);
    }

    #[test]
    fn kl_dominates_pinsker(y in 0.0f64..=1.0, mu in 0.001f64..0.999) {
        let kl = kl_bernoulli(y, mu);
        prop_assert!(kl.value >= 2.0 * (y - mu).powi(2) - 1e-15);
    }
}
