//! Fractional open-loop power control and thermal noise.

use crate::channel::dbm_to_mw;

/// Per-node power control state, all linear.
#[derive(Debug, Clone, Copy)]
pub struct PowerControl {
    /// Per-PRB cap: total max power divided by the PRBs the node uses.
    pub cap_mw: f64,
    /// Open-loop target (rho), mW.
    pub rho_mw: f64,
    /// Fractional compensation factor in [0, 1].
    pub epsilon: f64,
    /// PRBs occupied by this node's transmission.
    pub n_prbs_used: u32,
}

impl PowerControl {
    pub fn from_dbm(p_max_total_dbm: f64, rho_dbm: f64, epsilon: f64, n_prbs_used: u32) -> Self {
        PowerControl {
            cap_mw: dbm_to_mw(p_max_total_dbm) / n_prbs_used as f64,
            rho_mw: dbm_to_mw(rho_dbm),
            epsilon,
            n_prbs_used,
        }
    }

    /// Transmit power per PRB: `min(cap, rho * zeta^epsilon)` for serving
    /// large-scale loss `zeta` (path loss over antenna gain, linear).
    pub fn tx_power_mw(&self, zeta_lin: f64) -> f64 {
        debug_assert!(zeta_lin > 0.0);
        let wanted = self.rho_mw * zeta_lin.powf(self.epsilon);
        wanted.min(self.cap_mw)
    }

    /// Ground distance at which a link with `tau_hat * d^alpha / g` loss
    /// saturates the cap (infinite if it never does, 0 if always capped).
    pub fn saturation_distance_m(&self, tau_hat_lin: f64, alpha: f64, gain_lin: f64) -> f64 {
        if self.epsilon == 0.0 {
            return if self.rho_mw <= self.cap_mw {
                f64::INFINITY
            } else {
                0.0
            };
        }
        (gain_lin / tau_hat_lin).powf(1.0 / alpha)
            * (self.cap_mw / self.rho_mw).powf(1.0 / (alpha * self.epsilon))
    }
}

/// Thermal noise per PRB in mW: -174 dBm/Hz over the PRB bandwidth plus
/// the receiver noise figure.
pub fn noise_per_prb_mw(prb_bandwidth_hz: f64, noise_figure_db: f64) -> f64 {
    assert!(prb_bandwidth_hz > 0.0);
    dbm_to_mw(-174.0 + 10.0 * prb_bandwidth_hz.log10() + noise_figure_db)
}

/// Convenience wrapper matching the free-function operation shape.
pub fn tx_power_mw(pc: &PowerControl, zeta_lin: f64) -> f64 {
    pc.tx_power_mw(zeta_lin)
}
