//! BS antenna model: an N-element uniform vertical linear array times a
//! per-element vertical pattern.
//!
//! Zenith angle convention: theta is measured from the upward vertical at
//! the BS, so a node above the BS sees theta < 90 deg, a node below sees
//! theta > 90 deg, and a 102 deg downtilt points the main lobe slightly
//! below the horizon. For a node at ground distance `r` and height
//! difference `dh = h_node - h_bs`, `cos(theta) = dh / sqrt(r^2 + dh^2)`.

/// Vertical array pattern of a BS.
#[derive(Debug, Clone, Copy)]
pub struct AntennaPattern {
    pub n_elements: u32,
    /// cos of the electrical downtilt angle.
    pub cos_tilt: f64,
    /// Element spacing in wavelengths.
    pub spacing_wavelengths: f64,
    /// Peak element gain, linear.
    pub element_gain_max_lin: f64,
}

impl AntennaPattern {
    pub fn new(
        n_elements: u32,
        downtilt_deg: f64,
        spacing_wavelengths: f64,
        element_gain_max_lin: f64,
    ) -> AntennaPattern {
        AntennaPattern {
            n_elements,
            cos_tilt: downtilt_deg.to_radians().cos(),
            spacing_wavelengths,
            element_gain_max_lin,
        }
    }

    /// Array factor as a function of cos(theta); peaks at `n_elements` on
    /// the boresight cone and at grating angles.
    pub fn array_factor_cos(&self, cos_theta: f64) -> f64 {
        let n = self.n_elements as f64;
        let u = self.spacing_wavelengths * (cos_theta - self.cos_tilt);
        // removable singularity where all elements add in phase
        if (u - u.round()).abs() < 1e-9 {
            return n;
        }
        let s_n = (n * std::f64::consts::PI * u).sin();
        let s_1 = (std::f64::consts::PI * u).sin();
        s_n * s_n / (n * s_1 * s_1)
    }

    pub fn array_factor(&self, theta_rad: f64) -> f64 {
        self.array_factor_cos(theta_rad.cos())
    }

    /// Element pattern `g_E_max * sin^2(theta)`.
    pub fn element_gain(&self, theta_rad: f64) -> f64 {
        let s = theta_rad.sin();
        self.element_gain_max_lin * s * s
    }

    /// Full pattern `g_A * g_E` at zenith angle theta.
    pub fn gain(&self, theta_rad: f64) -> f64 {
        self.array_factor(theta_rad) * self.element_gain(theta_rad)
    }

    /// Full pattern for a node at ground distance `r` and height
    /// difference `dh = h_node - h_bs`, without trig calls.
    pub fn gain_at(&self, r_m: f64, dh_m: f64) -> f64 {
        let d_sq = r_m * r_m + dh_m * dh_m;
        if d_sq == 0.0 {
            return 0.0;
        }
        let cos_theta = dh_m / d_sq.sqrt();
        let sin_sq = r_m * r_m / d_sq;
        self.array_factor_cos(cos_theta) * self.element_gain_max_lin * sin_sq
    }

    /// Ground radii where the pattern has a null or the boresight peak for
    /// a node plane at height difference `dh`; used as quadrature
    /// breakpoints since the gain swings hard across them.
    pub fn feature_radii(&self, dh_m: f64, r_max_m: f64) -> Vec<f64> {
        let mut radii = Vec::new();
        if dh_m == 0.0 {
            return radii;
        }
        let n = self.n_elements as f64;
        let k_max = (2.0 * n * self.spacing_wavelengths).ceil() as i64 + 1;
        let mut push_cos = |c: f64| {
            // reachable iff c has the sign of dh and |c| <= 1
            if c.abs() < 1.0 && c * dh_m > 0.0 {
                let d = dh_m / c;
                if d.abs() >= dh_m.abs() {
                    let r = (d * d - dh_m * dh_m).sqrt();
                    if r > 0.0 && r <= r_max_m {
                        radii.push(r);
                    }
                }
            }
        };
        push_cos(self.cos_tilt); // boresight cone
        for k in -k_max..=k_max {
            if k == 0 || k.rem_euclid(self.n_elements as i64) == 0 {
                continue;
            }
            let c = self.cos_tilt + k as f64 / (n * self.spacing_wavelengths);
            push_cos(c);
        }
        radii.sort_by(|a, b| a.partial_cmp(b).unwrap());
        radii
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::db_to_lin;

    fn table_pattern() -> AntennaPattern {
        AntennaPattern::new(8, 102.0, 0.5, db_to_lin(8.0))
    }

    #[test]
    fn boresight_limit_is_n() {
        let p = table_pattern();
        assert_eq!(p.array_factor(102.0f64.to_radians()), 8.0);
        // approaching the singularity from the side stays close to N
        let theta = (102.0f64 + 1e-6).to_radians();
        assert!((p.array_factor(theta) - 8.0).abs() < 1e-3);
    }

    #[test]
    fn element_gain_peaks_at_horizon() {
        let p = table_pattern();
        let g = p.element_gain(std::f64::consts::FRAC_PI_2);
        assert!((g - db_to_lin(8.0)).abs() < 1e-12);
    }

    #[test]
    fn first_array_null() {
        let p = table_pattern();
        // N pi (cos t - cos t_t) / 2 = pi  =>  cos t = cos t_t + 2/N
        let cos_null = 102.0f64.to_radians().cos() + 2.0 / 8.0;
        let g = p.array_factor_cos(cos_null);
        assert!(g < 1e-12, "array factor at first null = {g}");
    }

    #[test]
    fn array_factor_conserves_power_over_sphere() {
        // (1/2) int_0^pi g_A(theta) sin(theta) dtheta = 1 for lambda/2 spacing
        for n in [1u32, 4, 8, 16] {
            let p = AntennaPattern::new(n, 102.0, 0.5, 1.0);
            let steps = 200_001;
            let h = std::f64::consts::PI / (steps - 1) as f64;
            let mut acc = 0.0;
            for i in 0..steps {
                let theta = i as f64 * h;
                let w = if i == 0 || i == steps - 1 {
                    1.0
                } else if i % 2 == 1 {
                    4.0
                } else {
                    2.0
                };
                acc += w * p.array_factor(theta) * theta.sin();
            }
            let mean = acc * h / 3.0 / 2.0;
            assert!(
                (mean - 1.0).abs() < 0.01,
                "N = {n}: mean sphere gain {mean}"
            );
        }
    }

    #[test]
    fn geometry_convention_above_and_below() {
        let p = table_pattern();
        // a GUE 23.5 m below the BS at r where theta = 102 deg hits boresight
        let r_boresight = 23.5 / (12.0f64).to_radians().tan();
        let g = p.gain_at(r_boresight, -23.5);
        let g_expect = 8.0 * db_to_lin(8.0) * (102.0f64.to_radians().sin().powi(2));
        assert!((g - g_expect).abs() / g_expect < 1e-6);
        // a UAV overhead sees the sin^2 null
        assert_eq!(p.gain_at(0.0, 75.0), 0.0);
    }

    #[test]
    fn feature_radii_land_on_nulls() {
        let p = table_pattern();
        let radii = p.feature_radii(-23.5, 10_000.0);
        assert!(!radii.is_empty());
        for &r in &radii {
            let d = (r * r + 23.5 * 23.5).sqrt();
            let c = -23.5 / d;
            let af = p.array_factor_cos(c);
            // either a null or the boresight peak
            assert!(
                af < 1e-9 || (af - 8.0).abs() < 1e-9,
                "feature at r = {r} has g_A = {af}"
            );
        }
    }
}
