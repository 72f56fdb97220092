//! Small statistical helpers for the simulation checks.

/// Two-sided 95% normal quantile.
pub const Z_95: f64 = 1.959_963_984_540_054;

/// Wilson score interval for `successes` out of `trials` at normal quantile `z`.
pub fn wilson_interval(successes: u64, trials: u64, z: f64) -> (f64, f64) {
    assert!(trials > 0 && successes <= trials);
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let centre = (p + z2 / (2.0 * n)) / denom;
    let half = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    let low = if successes == 0 { 0.0 } else { (centre - half).clamp(0.0, p) };
    let high = if successes == trials { 1.0 } else { (centre + half).clamp(p, 1.0) };
    (low, high)
}

/// Binomial standard error `sqrt(p (1 - p) / trials)` at the true `p`.
pub fn binomial_sigma(p: f64, trials: u64) -> f64 {
    (p * (1.0 - p) / trials as f64).sqrt()
}

/// Two-sample Kolmogorov-Smirnov statistic `sup |F_a - F_b|`.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> f64 {
    assert!(!a.is_empty() && !b.is_empty());
    let mut a = a.to_vec();
    let mut b = b.to_vec();
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

/// Asymptotic critical value of the two-sample KS statistic at level `alpha`.
pub fn ks_critical_value(alpha: f64, na: usize, nb: usize) -> f64 {
    let c = (-(alpha / 2.0).ln() / 2.0).sqrt();
    let (na, nb) = (na as f64, nb as f64);
    c * ((na + nb) / (na * nb)).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wilson_brackets_the_point_estimate() {
        for (s, n) in [(0u64, 10u64), (1, 10), (5, 10), (10, 10), (3, 1_000_000)] {
            let (lo, hi) = wilson_interval(s, n, Z_95);
            let p = s as f64 / n as f64;
            assert!(0.0 <= lo && lo <= p && p <= hi && hi <= 1.0, "{s}/{n}: [{lo}, {hi}]");
        }
    }

    #[test]
    fn wilson_reference_value() {
        // 50/100: centre 0.5, half-width z sqrt(0.0025 + z^2/40000) / (1 + z^2/100)
        let (lo, hi) = wilson_interval(50, 100, Z_95);
        assert!((lo - 0.403_831_4).abs() < 1e-6, "{lo}");
        assert!((hi - 0.596_168_6).abs() < 1e-6, "{hi}");
    }

    #[test]
    fn ks_statistic_by_hand() {
        assert_eq!(ks_two_sample(&[0.1, 0.2], &[0.1, 0.2]), 0.0);
        assert_eq!(ks_two_sample(&[0.1, 0.2], &[0.3, 0.4]), 1.0);
        // F_a jumps to 1/2 at 0.1; F_b is still 0
        assert_eq!(ks_two_sample(&[0.1, 0.5], &[0.2, 0.6]), 0.5);
    }

    #[test]
    fn ks_critical_value_one_percent() {
        let c = ks_critical_value(0.01, 100_000, 100_000);
        assert!((c - 1.627_624 * (2.0f64 / 100_000.0).sqrt()).abs() < 1e-8);
    }
}
