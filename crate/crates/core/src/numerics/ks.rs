//! Kolmogorov–Smirnov goodness-of-fit statistics.

/// One-sample statistic `sup |F_n − F|`. Sorts `samples` in place.
pub fn ks_statistic(samples: &mut [f64], cdf: impl Fn(f64) -> f64) -> f64 {
    samples.sort_by(f64::total_cmp);
    let n = samples.len() as f64;
    let mut d: f64 = 0.0;
    for (i, &x) in samples.iter().enumerate() {
        let f = cdf(x);
        let lo = i as f64 / n;
        let hi = (i + 1) as f64 / n;
        d = d.max((f - lo).abs()).max((hi - f).abs());
    }
    d
}

/// Two-sample statistic `sup |F_a − F_b|`. Sorts both slices in place.
pub fn ks_two_sample(a: &mut [f64], b: &mut [f64]) -> f64 {
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j) = (0, 0);
    let mut d: f64 = 0.0;
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    d
}

/// Asymptotic one-sample critical value `sqrt(−ln(α/2) / 2) / sqrt(n)`.
pub fn ks_critical_value(n: usize, significance: f64) -> f64 {
    (-(significance / 2.0).ln() / 2.0).sqrt() / (n as f64).sqrt()
}

/// Asymptotic two-sample critical value.
pub fn ks_two_sample_critical_value(n: usize, m: usize, significance: f64) -> f64 {
    let (n, m) = (n as f64, m as f64);
    (-(significance / 2.0).ln() / 2.0).sqrt() * ((n + m) / (n * m)).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn critical_value_at_1e3() {
        // c(α) = 1.9495 for α = 1e-3
        let c = ks_critical_value(100_000, 1e-3) * (100_000f64).sqrt();
        assert!((c - 1.9495).abs() < 1e-4);
    }

    #[test]
    fn perfect_grid_has_small_statistic() {
        let mut xs: Vec<f64> = (0..1000).map(|i| (i as f64 + 0.5) / 1000.0).collect();
        let d = ks_statistic(&mut xs, |x| x);
        assert!((d - 0.0005).abs() < 1e-12);
    }

    #[test]
    fn two_sample_identical_is_zero() {
        let mut a = vec![0.1, 0.5, 0.9];
        let mut b = a.clone();
        assert_eq!(ks_two_sample(&mut a, &mut b), 0.0);
        let mut c = vec![2.0, 3.0];
        assert_eq!(ks_two_sample(&mut a, &mut c), 1.0);
    }
}
