//! Nakagami-m small-scale fading: exact power CDF, the one-parameter
//! exponential-mixture approximation used by the analytical engine, and
//! exact sampling.

use rand::Rng;
use rand_distr::{Distribution, Exp1};
use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

/// Exact CDF of the Nakagami-m fading power (unit mean):
/// `1 - sum_{i<m} (m w)^i e^{-m w} / i!`.
pub fn nakagami_cdf(m: u32, omega: f64) -> f64 {
    assert!(m >= 1, "fading parameter m must be a positive integer");
    if omega <= 0.0 {
        return 0.0;
    }
    let mw = m as f64 * omega;
    let mut term = 1.0;
    let mut sum = 1.0;
    for i in 1..m {
        term *= mw / i as f64;
        sum += term;
    }
    1.0 - sum * (-mw).exp()
}

/// The fitted approximation `(1 - e^{-b w})^m`.
pub fn nakagami_cdf_approx(b: f64, m: u32, omega: f64) -> f64 {
    if omega <= 0.0 {
        return 0.0;
    }
    (1.0 - (-b * omega).exp()).powi(m as i32)
}

/// Least-squares fit of the approximation constant `b` for a given `m`,
/// over 200 log-spaced abscissae in [1e-3, 10]. Returns `(b, max_gap)`
/// where `max_gap` is the sup-norm CDF deviation on the fit grid.
/// Memoized per `m`.
pub fn fit_fading_b(m: u32) -> (f64, f64) {
    static CACHE: OnceLock<Mutex<HashMap<u32, (f64, f64)>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(&hit) = cache.lock().unwrap().get(&m) {
        return hit;
    }
    let grid = fit_grid();
    let exact: Vec<f64> = grid.iter().map(|&w| nakagami_cdf(m, w)).collect();
    let sse = |b: f64| -> f64 {
        grid.iter()
            .zip(&exact)
            .map(|(&w, &f)| {
                let d = nakagami_cdf_approx(b, m, w) - f;
                d * d
            })
            .sum()
    };
    let b = golden_min(sse, 0.2, (m as f64).max(3.0));
    let max_gap = grid
        .iter()
        .zip(&exact)
        .map(|(&w, &f)| (nakagami_cdf_approx(b, m, w) - f).abs())
        .fold(0.0, f64::max);
    cache.lock().unwrap().insert(m, (b, max_gap));
    (b, max_gap)
}

fn fit_grid() -> Vec<f64> {
    let (lo, hi, n) = (1e-3f64, 10.0f64, 200);
    (0..n)
        .map(|i| lo * (hi / lo).powf(i as f64 / (n - 1) as f64))
        .collect()
}

fn golden_min(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let inv_phi = 0.5 * (5.0f64.sqrt() - 1.0);
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..120 {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    0.5 * (a + b)
}

/// Draws a fading power with CDF exactly [`nakagami_cdf`]: the mean of
/// `m` unit-mean exponentials (a Gamma(m, 1/m) variate).
pub fn sample_fading<R: Rng + ?Sized>(m: u32, rng: &mut R) -> f64 {
    let mut acc = 0.0;
    for _ in 0..m {
        let e: f64 = Exp1.sample(rng);
        acc += e;
    }
    acc / m as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn exponential_case() {
        assert!((nakagami_cdf(1, 1.0) - (1.0 - (-1.0f64).exp())).abs() < 1e-15);
    }

    #[test]
    fn zero_power_has_zero_mass() {
        for m in [1, 3, 5, 7] {
            assert_eq!(nakagami_cdf(m, 0.0), 0.0);
        }
    }

    #[test]
    fn m3_at_unit_power() {
        // 1 - e^{-3} (1 + 3 + 4.5)
        let expected = 1.0 - (-3.0f64).exp() * 8.5;
        assert!((nakagami_cdf(3, 1.0) - expected).abs() < 1e-15);
        assert!((expected - 0.5768).abs() < 1e-4);
    }

    #[test]
    fn fit_is_identity_for_m1() {
        let (b, gap) = fit_fading_b(1);
        assert!((b - 1.0).abs() < 1e-6, "b(1) = {b}");
        assert!(gap < 1e-9);
    }

    #[test]
    fn fitted_constants_and_residuals() {
        // least-squares values on the 200-point log grid; the m = 5
        // residual is the family's floor (no b does better than 0.034)
        let (b3, gap3) = fit_fading_b(3);
        assert!((b3 - 1.785).abs() < 0.02, "b(3) = {b3}");
        assert!(gap3 < 0.03, "m = 3 sup gap = {gap3}");
        let (b5, gap5) = fit_fading_b(5);
        assert!((b5 - 2.209).abs() < 0.02, "b(5) = {b5}");
        assert!(gap5 < 0.045, "m = 5 sup gap = {gap5}");
    }

    #[test]
    fn fit_residual_is_recorded_off_grid_too() {
        for m in [3u32, 5] {
            let (b, gap) = fit_fading_b(m);
            let mut w = 5e-4;
            let mut sup: f64 = 0.0;
            while w < 30.0 {
                sup = sup.max((nakagami_cdf_approx(b, m, w) - nakagami_cdf(m, w)).abs());
                w *= 1.01;
            }
            // off-grid sup stays at the on-grid level
            assert!(sup < gap + 0.005, "m = {m}: off-grid sup gap = {sup} vs {gap}");
        }
    }

    #[test]
    fn sampler_matches_exact_cdf() {
        let mut rng = ChaCha8Rng::seed_from_u64(0xFAD1);
        let n = 1_000_000usize;
        let mut mean = 0.0;
        let mut below_one = 0usize;
        for _ in 0..n {
            let x = sample_fading(3, &mut rng);
            mean += x;
            if x < 1.0 {
                below_one += 1;
            }
        }
        mean /= n as f64;
        assert!((mean - 1.0).abs() < 0.01, "mean = {mean}");
        let ecdf = below_one as f64 / n as f64;
        assert!(
            (ecdf - nakagami_cdf(3, 1.0)).abs() < 0.005,
            "empirical CDF at 1 = {ecdf}"
        );
    }

    #[test]
    fn m1_sampler_is_exponential() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let n = 200_000usize;
        let mut below_half = 0usize;
        for _ in 0..n {
            if sample_fading(1, &mut rng) < 0.5 {
                below_half += 1;
            }
        }
        let expected = 1.0 - (-0.5f64).exp();
        assert!((below_half as f64 / n as f64 - expected).abs() < 0.005);
    }
}
