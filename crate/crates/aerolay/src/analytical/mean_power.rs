//! Mean UAV transmit power under fractional power control over the
//! truncated-Rayleigh pair distance, mixed over the LoS/NLoS state of the
//! serving U2U link.
//!
//! On each LoS step cell the fractionally-controlled region integrates to
//! a difference of lower incomplete gamma functions, and the capped
//! region to a difference of Gaussian tails; the total is the sum over
//! cells of both propagation states.

use statrs::function::gamma::gamma_li;

/// Lower incomplete gamma with the gamma(a, 0) = 0 limit (statrs
/// excludes x = 0 from its domain).
fn lower_gamma(a: f64, x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        gamma_li(a, x)
    }
}

use crate::channel::{LinkKind, LosState, LosTable};
use crate::config::Scenario;
use crate::error::Result;
use crate::quad::edges_with_breakpoints;

/// Mean UAV transmit power per PRB, mW, using the scenario's LoS grid.
pub fn mean_uav_tx_power_mw(sc: &Scenario) -> Result<f64> {
    mean_power_with_table(sc, sc.los_table(LinkKind::UavToUav))
}

/// Same quantity with an injectable LoS table (the all-LoS consistency
/// check passes [`LosTable::always_los`]).
pub fn mean_power_with_table(sc: &Scenario, table: &LosTable) -> Result<f64> {
    let pc = sc.pc_uav()?;
    if pc.epsilon == 0.0 {
        // zeta^0 = 1: the power-control law degenerates to min(cap, rho)
        return Ok(pc.rho_mw.min(pc.cap_mw));
    }
    let sigma_sq2 = 2.0 * sc.sigma_u_m * sc.sigma_u_m;
    let r_max = sc.r_max_u2u_m;
    let norm = 1.0 - (-r_max * r_max / sigma_sq2).exp();
    let mut total = 0.0;
    for state in LosState::BOTH {
        let p = sc.link_params(LinkKind::UavToUav, state);
        let r_sat = pc.saturation_distance_m(p.tau_hat_lin, p.alpha, 1.0);
        let r_frac_end = r_sat.min(r_max);
        let state_prob = |r: f64| -> Result<f64> {
            Ok(match state {
                LosState::Los => table.los_probability(r)?,
                LosState::Nlos => table.nlos_probability(r)?,
            })
        };

        // fractional-control region [0, min(r_sat, r_max)]
        let a = 1.0 + p.alpha * pc.epsilon / 2.0;
        let scale =
            sigma_sq2.powf(p.alpha * pc.epsilon / 2.0) * pc.rho_mw * p.tau_hat_lin.powf(pc.epsilon)
                / norm;
        let edges = edges_with_breakpoints(0.0, r_frac_end, &table.breakpoints_in(0.0, r_frac_end));
        for w in edges.windows(2) {
            let pr = state_prob(0.5 * (w[0] + w[1]))?;
            if pr == 0.0 {
                continue;
            }
            let y_lo = w[0] * w[0] / sigma_sq2;
            let y_hi = w[1] * w[1] / sigma_sq2;
            total += scale * pr * (lower_gamma(a, y_hi) - lower_gamma(a, y_lo));
        }

        // capped region [r_sat, r_max]
        if r_frac_end < r_max {
            let edges =
                edges_with_breakpoints(r_frac_end, r_max, &table.breakpoints_in(r_frac_end, r_max));
            for w in edges.windows(2) {
                let pr = state_prob(0.5 * (w[0] + w[1]))?;
                if pr == 0.0 {
                    continue;
                }
                let tail =
                    (-w[0] * w[0] / sigma_sq2).exp() - (-w[1] * w[1] / sigma_sq2).exp();
                total += pc.cap_mw * pr * tail / norm;
            }
        }
    }
    Ok(total)
}

/// Closed-form mean UAV transmit power in the all-LoS regime (high UAV
/// altitude): a single incomplete-gamma term plus the capped tail.
/// The caller asserts the regime; no LoS grid is consulted.
pub fn mean_uav_tx_power_los_mw(sc: &Scenario) -> Result<f64> {
    let pc = sc.pc_uav()?;
    if pc.epsilon == 0.0 {
        return Ok(pc.rho_mw.min(pc.cap_mw));
    }
    let p = sc.link_params(LinkKind::UavToUav, LosState::Los);
    let sigma_sq2 = 2.0 * sc.sigma_u_m * sc.sigma_u_m;
    let r_max = sc.r_max_u2u_m;
    let norm = 1.0 - (-r_max * r_max / sigma_sq2).exp();
    let r_eff = pc
        .saturation_distance_m(p.tau_hat_lin, p.alpha, 1.0)
        .min(r_max);
    let a = 1.0 + p.alpha * pc.epsilon / 2.0;
    let c1 =
        sigma_sq2.powf(p.alpha * pc.epsilon / 2.0) * pc.rho_mw * p.tau_hat_lin.powf(pc.epsilon)
            / norm;
    let y_eff = r_eff * r_eff / sigma_sq2;
    let y_max = r_max * r_max / sigma_sq2;
    Ok(c1 * lower_gamma(a, y_eff) + pc.cap_mw * ((-y_eff).exp() - (-y_max).exp()) / norm)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{mw_to_dbm, LosTable};
    use crate::config::ScenarioConfig;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    // Sampling oracle: draw pair distances from the truncated Rayleigh
    // law, the link state from the exact LoS product, and average the
    // exact power-control law.
    fn sampled_mean_power(sc: &crate::config::Scenario, n: usize, seed: u64) -> f64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let pc = sc.pc_uav().unwrap();
        let sigma_sq2 = 2.0 * sc.sigma_u_m * sc.sigma_u_m;
        let trunc = 1.0 - (-sc.r_max_u2u_m * sc.r_max_u2u_m / sigma_sq2).exp();
        let mut acc = 0.0;
        for _ in 0..n {
            let u: f64 = rng.gen();
            let r = (-sigma_sq2 * (1.0 - u * trunc).ln()).sqrt();
            let p_los = sc
                .los_model
                .exact_los_probability(sc.h_u_m, sc.h_u_m, r)
                .unwrap();
            let state = if rng.gen::<f64>() < p_los {
                crate::channel::LosState::Los
            } else {
                crate::channel::LosState::Nlos
            };
            let zeta = sc.zeta(crate::channel::LinkKind::UavToUav, state, r).unwrap();
            acc += pc.tx_power_mw(zeta);
        }
        acc / n as f64
    }

    #[test]
    fn epsilon_zero_is_rho() {
        let mut cfg = ScenarioConfig::default();
        cfg.epsilon_u = 0.0;
        let sc = cfg.derive().unwrap();
        let p = mean_uav_tx_power_mw(&sc).unwrap();
        assert_eq!(p, sc.pc_uav().unwrap().rho_mw);
    }

    #[test]
    fn table_defaults_match_sampling_oracle() {
        let sc = ScenarioConfig::default().derive().unwrap();
        let analytical = mean_uav_tx_power_mw(&sc).unwrap();
        let sampled = sampled_mean_power(&sc, 1_000_000, 0xBEEF);
        let rel = (analytical - sampled).abs() / sampled;
        assert!(
            rel < 0.01,
            "analytical {} dBm vs sampled {} dBm (rel {rel})",
            mw_to_dbm(analytical),
            mw_to_dbm(sampled)
        );
    }

    #[test]
    fn all_los_grid_reduces_to_closed_form() {
        let sc = ScenarioConfig::default().derive().unwrap();
        let general = mean_power_with_table(&sc, &LosTable::always_los()).unwrap();
        let closed = mean_uav_tx_power_los_mw(&sc).unwrap();
        let rel = (general - closed).abs() / closed;
        assert!(rel < 1e-9, "general {general} vs closed {closed}");
    }

    #[test]
    fn closed_form_saturation_edges() {
        // cap far above the fractional law: the capped tail vanishes
        let mut cfg = ScenarioConfig::default();
        cfg.p_max_u_dbm = 80.0;
        let sc = cfg.derive().unwrap();
        let pc = sc.pc_uav().unwrap();
        let p = sc.link_params(LinkKind::UavToUav, LosState::Los);
        assert!(pc.saturation_distance_m(p.tau_hat_lin, p.alpha, 1.0) > sc.r_max_u2u_m);
        let closed = mean_uav_tx_power_los_mw(&sc).unwrap();
        assert!(closed < pc.cap_mw);

        // rho far above the cap: always capped, mean = cap
        let mut cfg = ScenarioConfig::default();
        cfg.rho_u_dbm = 40.0;
        cfg.p_max_u_dbm = 4.0;
        let sc = cfg.derive().unwrap();
        let closed = mean_uav_tx_power_los_mw(&sc).unwrap();
        let cap = sc.pc_uav().unwrap().cap_mw;
        let rel = (closed - cap).abs() / cap;
        assert!(rel < 1e-9, "always-capped mean {closed}");
    }

    #[test]
    fn capped_mass_grows_with_epsilon() {
        // larger epsilon compensates more loss, so the mean power rises
        let mut prev = 0.0;
        for eps in [0.2, 0.4, 0.6, 0.8] {
            let mut cfg = ScenarioConfig::default();
            cfg.epsilon_u = eps;
            let sc = cfg.derive().unwrap();
            let p = mean_uav_tx_power_mw(&sc).unwrap();
            assert!(p > prev, "eps {eps}: {p}");
            prev = p;
        }
    }
}
