//! Poisson point process sampling on a disk.

use rand::Rng;
use rand_distr::{Distribution, Poisson};

/// Radial intensity of a planar process.
#[derive(Debug, Clone, Copy)]
pub enum RadialDensity {
    /// Homogeneous, per m^2.
    Constant(f64),
    /// `lambda_b (1 - exp(-lambda_b pi r^2))`: the interfering-GUE field
    /// seen by the typical BS.
    NearestBsExcluded { lambda_b: f64 },
}

impl RadialDensity {
    /// Expected point count in a disk of the given radius.
    pub fn mass(&self, radius_m: f64) -> f64 {
        let area = std::f64::consts::PI * radius_m * radius_m;
        match *self {
            RadialDensity::Constant(lambda) => lambda * area,
            RadialDensity::NearestBsExcluded { lambda_b } => {
                lambda_b * area - (1.0 - (-lambda_b * area).exp())
            }
        }
    }

    /// CDF of the radial coordinate of one point, given the disk.
    fn radial_cdf(&self, r: f64, radius_m: f64) -> f64 {
        debug_assert!(r <= radius_m);
        match *self {
            RadialDensity::Constant(_) => (r / radius_m).powi(2),
            RadialDensity::NearestBsExcluded { lambda_b } => {
                let pi = std::f64::consts::PI;
                let partial = lambda_b * pi * r * r - (1.0 - (-lambda_b * pi * r * r).exp());
                partial / self.mass(radius_m)
            }
        }
    }

    fn sample_radius<R: Rng + ?Sized>(&self, radius_m: f64, rng: &mut R) -> f64 {
        let u: f64 = rng.gen();
        match *self {
            RadialDensity::Constant(_) => radius_m * u.sqrt(),
            RadialDensity::NearestBsExcluded { .. } => {
                // monotone CDF: bisect to the window's float resolution
                let (mut lo, mut hi) = (0.0, radius_m);
                for _ in 0..60 {
                    let mid = 0.5 * (lo + hi);
                    if self.radial_cdf(mid, radius_m) < u {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                0.5 * (lo + hi)
            }
        }
    }
}

/// Samples one realization: Poisson count with the density's mass over
/// the disk, positions by inverse-CDF radial sampling and uniform angle.
pub fn sample_ppp<R: Rng + ?Sized>(
    density: &RadialDensity,
    window_radius_m: f64,
    rng: &mut R,
) -> Vec<(f64, f64)> {
    let mass = density.mass(window_radius_m);
    if mass <= 0.0 {
        return Vec::new();
    }
    let n = Poisson::new(mass).expect("positive mass").sample(rng) as usize;
    (0..n)
        .map(|_| {
            let r = density.sample_radius(window_radius_m, rng);
            let theta = rng.gen::<f64>() * 2.0 * std::f64::consts::PI;
            (r * theta.cos(), r * theta.sin())
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use statrs::distribution::{ChiSquared, ContinuousCDF};

    #[test]
    fn zero_density_gives_empty_realization() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert!(sample_ppp(&RadialDensity::Constant(0.0), 5000.0, &mut rng).is_empty());
    }

    #[test]
    fn poisson_mean_count() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let density = RadialDensity::Constant(5e-6);
        let expect = density.mass(5000.0);
        assert!((expect - 392.7).abs() < 0.1);
        let mut acc = 0usize;
        let draws = 10_000;
        for _ in 0..draws {
            acc += sample_ppp(&density, 5000.0, &mut rng).len();
        }
        let mean = acc as f64 / draws as f64;
        assert!(
            (mean - expect).abs() / expect < 0.02,
            "mean count {mean} vs {expect}"
        );
    }

    #[test]
    fn nonhomogeneous_radial_histogram_matches_density() {
        let lambda_b = 5e-6;
        let density = RadialDensity::NearestBsExcluded { lambda_b };
        let window = 3000.0;
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let n_bins = 20;
        let mut observed = vec![0.0f64; n_bins];
        let drops = 400;
        for _ in 0..drops {
            for (x, y) in sample_ppp(&density, window, &mut rng) {
                let r = (x * x + y * y).sqrt();
                let bin = ((r / window) * n_bins as f64) as usize;
                observed[bin.min(n_bins - 1)] += 1.0;
            }
        }
        let mass = density.mass(window);
        let mut stat = 0.0;
        let mut dof = 0.0;
        for k in 0..n_bins {
            let lo = window * k as f64 / n_bins as f64;
            let hi = window * (k + 1) as f64 / n_bins as f64;
            let expected = drops as f64
                * mass
                * (density.radial_cdf(hi, window) - density.radial_cdf(lo, window));
            if expected < 5.0 {
                continue;
            }
            stat += (observed[k] - expected).powi(2) / expected;
            dof += 1.0;
        }
        let p = 1.0 - ChiSquared::new(dof - 1.0).unwrap().cdf(stat);
        assert!(p > 0.01, "chi-squared p = {p} (stat {stat}, dof {dof})");
    }
}
