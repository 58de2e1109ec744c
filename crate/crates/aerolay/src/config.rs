//! Scenario parameters: the raw config (flat key = value schema, urban
//! macro defaults at 2 GHz) and the derived all-linear [`Scenario`] both
//! engines consume. dB/dBm fields are converted to linear exactly once,
//! at derivation.

use std::collections::hash_map::DefaultHasher;
use std::hash::{Hash, Hasher};

use crate::channel::{
    db_to_lin, dist_3d_m, fit_fading_b, noise_per_prb_mw, path_loss_linear, AntennaPattern,
    LinkKind, LosModel, LosState, LosTable, PowerControl,
};
use crate::curve::LinkClass;
use crate::error::{AerolayError, Result};

/// Spectrum sharing strategy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SharingMode {
    /// UAV pairs hop over a fraction eta_u of the GUE uplink PRBs;
    /// both link types interfere with each other.
    Underlay,
    /// Orthogonal split: a fraction eta_u of the PRBs is reserved to
    /// UAVs, the rest to GUEs; no cross-type interference.
    Overlay,
}

impl SharingMode {
    pub fn name(self) -> &'static str {
        match self {
            SharingMode::Underlay => "underlay",
            SharingMode::Overlay => "overlay",
        }
    }
}

/// Raw scenario parameters; field names double as config-file keys.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    /// BS density, per m^2.
    pub lambda_b: f64,
    /// UAV transmit-receive pair density, per m^2.
    pub lambda_u: f64,
    /// BS height, m.
    pub h_b_m: f64,
    /// UAV height, m.
    pub h_u_m: f64,
    /// GUE height, m.
    pub h_g_m: f64,
    /// Mean U2U pair distance, m.
    pub mean_u2u_distance_m: f64,
    /// Maximum U2U pair distance, m.
    pub r_max_u2u_m: f64,
    pub sharing_mode: SharingMode,
    /// Spectrum access factor (underlay) / partition factor (overlay).
    pub eta_u: f64,
    pub n_prbs: u32,
    pub prb_bandwidth_hz: f64,
    pub carrier_ghz: f64,
    pub noise_figure_db: f64,
    /// ITU LoS environment constants.
    pub a1: f64,
    pub a2: f64,
    pub a3: f64,
    pub n_antenna_elements: u32,
    pub downtilt_deg: f64,
    pub element_gain_max_db: f64,
    pub spacing_wavelengths: f64,
    pub epsilon_u: f64,
    pub epsilon_g: f64,
    pub rho_u_dbm: f64,
    pub rho_g_dbm: f64,
    pub p_max_u_dbm: f64,
    pub p_max_g_dbm: f64,
    /// Nakagami m for LoS links originating at a UAV (uu, ub).
    pub m_los_uav: u32,
    /// Nakagami m for LoS links originating at a GUE (gu, gb).
    pub m_los_gue: u32,
    /// Nakagami m for all NLoS links.
    pub m_nlos: u32,
    /// Deployment disk radius shared by both engines; 0 selects
    /// max(5 km, 10/sqrt(pi * lambda_min)).
    pub field_radius_m: f64,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        ScenarioConfig {
            lambda_b: 5e-6,
            lambda_u: 1e-6,
            h_b_m: 25.0,
            h_u_m: 100.0,
            h_g_m: 1.5,
            mean_u2u_distance_m: 100.0,
            r_max_u2u_m: 500.0,
            sharing_mode: SharingMode::Underlay,
            eta_u: 0.1,
            n_prbs: 50,
            prb_bandwidth_hz: 200e3,
            carrier_ghz: 2.0,
            noise_figure_db: 7.0,
            a1: 0.3,
            a2: 500.0,
            a3: 20.0,
            n_antenna_elements: 8,
            downtilt_deg: 102.0,
            element_gain_max_db: 8.0,
            spacing_wavelengths: 0.5,
            epsilon_u: 0.6,
            epsilon_g: 0.6,
            rho_u_dbm: -58.0,
            rho_g_dbm: -58.0,
            p_max_u_dbm: 24.0,
            p_max_g_dbm: 24.0,
            m_los_uav: 5,
            m_los_gue: 3,
            m_nlos: 1,
            field_radius_m: 0.0,
        }
    }
}

fn bad(key: &str, constraint: impl Into<String>) -> AerolayError {
    AerolayError::Config {
        key: key.to_string(),
        constraint: constraint.into(),
    }
}

impl ScenarioConfig {
    /// Applies one config-file entry. Returns Ok(false) when the key is
    /// not a scenario key (the caller may route it elsewhere).
    pub fn apply_key(&mut self, key: &str, value: &str) -> Result<bool> {
        fn f(key: &str, v: &str) -> Result<f64> {
            v.parse::<f64>()
                .map_err(|_| bad(key, format!("not a number: `{v}`")))
        }
        fn u(key: &str, v: &str) -> Result<u32> {
            v.parse::<u32>()
                .map_err(|_| bad(key, format!("not a non-negative integer: `{v}`")))
        }
        match key {
            "lambda_b" => self.lambda_b = f(key, value)?,
            "lambda_u" => self.lambda_u = f(key, value)?,
            "h_b_m" => self.h_b_m = f(key, value)?,
            "h_u_m" => self.h_u_m = f(key, value)?,
            "h_g_m" => self.h_g_m = f(key, value)?,
            "mean_u2u_distance_m" => self.mean_u2u_distance_m = f(key, value)?,
            "r_max_u2u_m" => self.r_max_u2u_m = f(key, value)?,
            "sharing_mode" => {
                self.sharing_mode = match value {
                    "underlay" => SharingMode::Underlay,
                    "overlay" => SharingMode::Overlay,
                    other => {
                        return Err(bad(key, format!("must be underlay|overlay, got `{other}`")))
                    }
                }
            }
            "eta_u" => self.eta_u = f(key, value)?,
            "n_prbs" => self.n_prbs = u(key, value)?,
            "prb_bandwidth_hz" => self.prb_bandwidth_hz = f(key, value)?,
            "carrier_ghz" => self.carrier_ghz = f(key, value)?,
            "noise_figure_db" => self.noise_figure_db = f(key, value)?,
            "a1" => self.a1 = f(key, value)?,
            "a2" => self.a2 = f(key, value)?,
            "a3" => self.a3 = f(key, value)?,
            "n_antenna_elements" => self.n_antenna_elements = u(key, value)?,
            "downtilt_deg" => self.downtilt_deg = f(key, value)?,
            "element_gain_max_db" => self.element_gain_max_db = f(key, value)?,
            "spacing_wavelengths" => self.spacing_wavelengths = f(key, value)?,
            "epsilon_u" => self.epsilon_u = f(key, value)?,
            "epsilon_g" => self.epsilon_g = f(key, value)?,
            "rho_u_dbm" => self.rho_u_dbm = f(key, value)?,
            "rho_g_dbm" => self.rho_g_dbm = f(key, value)?,
            "p_max_u_dbm" => self.p_max_u_dbm = f(key, value)?,
            "p_max_g_dbm" => self.p_max_g_dbm = f(key, value)?,
            "m_los_uav" => self.m_los_uav = u(key, value)?,
            "m_los_gue" => self.m_los_gue = u(key, value)?,
            "m_nlos" => self.m_nlos = u(key, value)?,
            "field_radius_m" => self.field_radius_m = f(key, value)?,
            _ => return Ok(false),
        }
        Ok(true)
    }

    /// Validates and derives the linear scenario.
    pub fn derive(&self) -> Result<Scenario> {
        Scenario::from_config(self)
    }

    /// Stable-within-a-build hash used as curve provenance metadata.
    pub fn hash_value(&self) -> u64 {
        let mut h = DefaultHasher::new();
        format!("{self:?}").hash(&mut h);
        h.finish()
    }
}

/// Per (link kind, propagation state) derived parameters, linear.
#[derive(Debug, Clone, Copy)]
pub struct LinkStateParams {
    pub tau_hat_lin: f64,
    pub alpha: f64,
    pub m: u32,
    /// Fitted fading-approximation constant for this m.
    pub b: f64,
}

#[derive(Debug, Clone, Copy)]
struct LinkParams {
    los: LinkStateParams,
    nlos: LinkStateParams,
}

/// Fully derived scenario: immutable after load, safely shareable.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub config: ScenarioConfig,
    pub lambda_b: f64,
    pub lambda_u: f64,
    /// Active-GUE density on each PRB (equals lambda_b).
    pub lambda_g: f64,
    /// Rayleigh scale of the U2U pair distance.
    pub sigma_u_m: f64,
    pub r_max_u2u_m: f64,
    /// Rayleigh scale of the GUE serving distance, 1/sqrt(2 pi lambda_b).
    pub sigma_g_m: f64,
    pub h_b_m: f64,
    pub h_u_m: f64,
    pub h_g_m: f64,
    pub mode: SharingMode,
    pub eta_u: f64,
    pub n_prbs: u32,
    pub prb_bandwidth_hz: f64,
    pub noise_mw_per_prb: f64,
    pub field_radius_m: f64,
    pub antenna: AntennaPattern,
    pub los_model: LosModel,
    params: [LinkParams; 4],
    los_tables: [LosTable; 4],
    pc_uav: Option<PowerControl>,
    pc_gue: Option<PowerControl>,
    /// PRBs used by each side; None when the mode allocates it nothing.
    pub n_prbs_uav: Option<u32>,
    pub n_prbs_gue: Option<u32>,
    config_hash: u64,
}

fn link_index(link: LinkKind) -> usize {
    match link {
        LinkKind::UavToUav => 0,
        LinkKind::GueToUav => 1,
        LinkKind::UavToBs => 2,
        LinkKind::GueToBs => 3,
    }
}

impl Scenario {
    fn from_config(cfg: &ScenarioConfig) -> Result<Scenario> {
        if cfg.lambda_b <= 0.0 {
            return Err(bad("lambda_b", "must be > 0"));
        }
        if cfg.lambda_u < 0.0 {
            return Err(bad("lambda_u", "must be >= 0"));
        }
        for (key, v) in [
            ("h_b_m", cfg.h_b_m),
            ("h_u_m", cfg.h_u_m),
            ("h_g_m", cfg.h_g_m),
        ] {
            if v <= 0.0 {
                return Err(bad(key, "height must be > 0"));
            }
        }
        if cfg.mean_u2u_distance_m <= 0.0 {
            return Err(bad("mean_u2u_distance_m", "must be > 0"));
        }
        if cfg.r_max_u2u_m <= 0.0 {
            return Err(bad("r_max_u2u_m", "must be > 0"));
        }
        if !(0.0..=1.0).contains(&cfg.eta_u) {
            return Err(bad("eta_u", format!("must be in [0, 1], got {}", cfg.eta_u)));
        }
        for (key, v) in [("epsilon_u", cfg.epsilon_u), ("epsilon_g", cfg.epsilon_g)] {
            if !(0.0..=1.0).contains(&v) {
                return Err(bad(key, format!("must be in [0, 1], got {v}")));
            }
        }
        if cfg.n_prbs == 0 {
            return Err(bad("n_prbs", "must be >= 1"));
        }
        if cfg.prb_bandwidth_hz <= 0.0 {
            return Err(bad("prb_bandwidth_hz", "must be > 0"));
        }
        if cfg.carrier_ghz <= 0.0 {
            return Err(bad("carrier_ghz", "must be > 0"));
        }
        for (key, v) in [("a1", cfg.a1), ("a2", cfg.a2), ("a3", cfg.a3)] {
            if v <= 0.0 {
                return Err(bad(key, "must be > 0"));
            }
        }
        if cfg.n_antenna_elements == 0 {
            return Err(bad("n_antenna_elements", "must be >= 1"));
        }
        if !(0.0 < cfg.downtilt_deg && cfg.downtilt_deg < 180.0) {
            return Err(bad("downtilt_deg", "must lie in (0, 180)"));
        }
        if cfg.spacing_wavelengths <= 0.0 {
            return Err(bad("spacing_wavelengths", "must be > 0"));
        }
        for (key, v) in [
            ("m_los_uav", cfg.m_los_uav),
            ("m_los_gue", cfg.m_los_gue),
            ("m_nlos", cfg.m_nlos),
        ] {
            if v == 0 {
                return Err(bad(key, "fading parameter must be a positive integer"));
            }
        }
        if cfg.field_radius_m < 0.0 {
            return Err(bad("field_radius_m", "must be >= 0 (0 = auto)"));
        }

        let fc = cfg.carrier_ghz;
        let log_fc = fc.log10();
        let log_hu = cfg.h_u_m.log10();
        let tau_nlos_uav_db = -17.5 + 20.0 * (40.0 * std::f64::consts::PI * fc / 3.0).log10();

        let mk = |tau_l_db: f64, tau_n_db: f64, a_l: f64, a_n: f64, m_l: u32, m_n: u32| {
            LinkParams {
                los: LinkStateParams {
                    tau_hat_lin: db_to_lin(tau_l_db),
                    alpha: a_l,
                    m: m_l,
                    b: fit_fading_b(m_l).0,
                },
                nlos: LinkStateParams {
                    tau_hat_lin: db_to_lin(tau_n_db),
                    alpha: a_n,
                    m: m_n,
                    b: fit_fading_b(m_n).0,
                },
            }
        };
        let params = [
            // uu
            mk(
                28.0 + 20.0 * log_fc,
                tau_nlos_uav_db,
                2.2,
                4.6 - 0.7 * log_hu,
                cfg.m_los_uav,
                cfg.m_nlos,
            ),
            // gu
            mk(
                30.9 + 20.0 * log_fc,
                32.4 + 20.0 * log_fc,
                2.225 - 0.05 * log_hu,
                4.32 - 0.76 * log_hu,
                cfg.m_los_gue,
                cfg.m_nlos,
            ),
            // ub
            mk(
                28.0 + 20.0 * log_fc,
                tau_nlos_uav_db,
                2.2,
                4.6 - 0.7 * log_hu,
                cfg.m_los_uav,
                cfg.m_nlos,
            ),
            // gb
            mk(
                28.0 + 20.0 * log_fc,
                13.54 + 20.0 * log_fc,
                2.2,
                3.9,
                cfg.m_los_gue,
                cfg.m_nlos,
            ),
        ];
        for (link, p) in LinkKind::ALL.iter().zip(&params) {
            if p.los.alpha > p.nlos.alpha {
                return Err(bad(
                    "h_u_m",
                    format!(
                        "derived path loss exponents violate alpha_L <= alpha_N on {} \
                         ({} > {}); lower the UAV height",
                        link.name(),
                        p.los.alpha,
                        p.nlos.alpha
                    ),
                ));
            }
        }

        // auto window: ten mean cell scales of the BS deployment, floored
        // at 5 km and capped so degenerate densities cannot blow up table
        // sizes and drop costs. Interference truncation error scales with
        // interferer density, so sparser populations need no extra radius;
        // sizing by lambda_b alone also keeps every GUE-side result
        // independent of the UAV process, which overlay invariance relies on.
        let field_radius_m = if cfg.field_radius_m > 0.0 {
            cfg.field_radius_m
        } else {
            (10.0 / (cfg.lambda_b * std::f64::consts::PI).sqrt()).clamp(5000.0, 50_000.0)
        };

        let los_model = LosModel {
            a1: cfg.a1,
            a2: cfg.a2,
            a3: cfg.a3,
        };
        let hs = |link: LinkKind| -> (f64, f64) {
            match link {
                LinkKind::UavToUav => (cfg.h_u_m, cfg.h_u_m),
                LinkKind::GueToUav => (cfg.h_g_m, cfg.h_u_m),
                LinkKind::UavToBs => (cfg.h_u_m, cfg.h_b_m),
                LinkKind::GueToBs => (cfg.h_g_m, cfg.h_b_m),
            }
        };
        let los_tables = LinkKind::ALL.map(|link| {
            let (ht, hr) = hs(link);
            LosTable::build(&los_model, ht, hr, field_radius_m)
        });

        // PRB allocation per side; rate bandwidths follow from these.
        let round_share = |share: f64| -> Option<u32> {
            if share == 0.0 {
                None
            } else {
                Some(((share * cfg.n_prbs as f64).round() as u32).clamp(1, cfg.n_prbs))
            }
        };
        let n_prbs_uav = round_share(cfg.eta_u);
        let n_prbs_gue = match cfg.sharing_mode {
            SharingMode::Underlay => Some(cfg.n_prbs),
            SharingMode::Overlay => round_share(1.0 - cfg.eta_u),
        };

        let pc_uav = n_prbs_uav
            .map(|n| PowerControl::from_dbm(cfg.p_max_u_dbm, cfg.rho_u_dbm, cfg.epsilon_u, n));
        let pc_gue = n_prbs_gue
            .map(|n| PowerControl::from_dbm(cfg.p_max_g_dbm, cfg.rho_g_dbm, cfg.epsilon_g, n));

        Ok(Scenario {
            config: cfg.clone(),
            lambda_b: cfg.lambda_b,
            lambda_u: cfg.lambda_u,
            lambda_g: cfg.lambda_b,
            sigma_u_m: (2.0 / std::f64::consts::PI).sqrt() * cfg.mean_u2u_distance_m,
            r_max_u2u_m: cfg.r_max_u2u_m,
            sigma_g_m: 1.0 / (2.0 * std::f64::consts::PI * cfg.lambda_b).sqrt(),
            h_b_m: cfg.h_b_m,
            h_u_m: cfg.h_u_m,
            h_g_m: cfg.h_g_m,
            mode: cfg.sharing_mode,
            eta_u: cfg.eta_u,
            n_prbs: cfg.n_prbs,
            prb_bandwidth_hz: cfg.prb_bandwidth_hz,
            noise_mw_per_prb: noise_per_prb_mw(cfg.prb_bandwidth_hz, cfg.noise_figure_db),
            field_radius_m,
            antenna: AntennaPattern::new(
                cfg.n_antenna_elements,
                cfg.downtilt_deg,
                cfg.spacing_wavelengths,
                db_to_lin(cfg.element_gain_max_db),
            ),
            los_model,
            params,
            los_tables,
            pc_uav,
            pc_gue,
            n_prbs_uav,
            n_prbs_gue,
            config_hash: cfg.hash_value(),
        })
    }

    pub fn link_params(&self, link: LinkKind, state: LosState) -> &LinkStateParams {
        let p = &self.params[link_index(link)];
        match state {
            LosState::Los => &p.los,
            LosState::Nlos => &p.nlos,
        }
    }

    pub fn los_table(&self, link: LinkKind) -> &LosTable {
        &self.los_tables[link_index(link)]
    }

    /// (tx height, rx height) for a link kind.
    pub fn heights(&self, link: LinkKind) -> (f64, f64) {
        match link {
            LinkKind::UavToUav => (self.h_u_m, self.h_u_m),
            LinkKind::GueToUav => (self.h_g_m, self.h_u_m),
            LinkKind::UavToBs => (self.h_u_m, self.h_b_m),
            LinkKind::GueToBs => (self.h_g_m, self.h_b_m),
        }
    }

    /// Antenna gain on a link at ground distance `r`: the BS vertical
    /// pattern on BS-terminated links, 0 dBi omni otherwise.
    pub fn link_gain(&self, link: LinkKind, r_m: f64) -> f64 {
        match link {
            LinkKind::UavToBs => self.antenna.gain_at(r_m, self.h_u_m - self.h_b_m),
            LinkKind::GueToBs => self.antenna.gain_at(r_m, self.h_g_m - self.h_b_m),
            LinkKind::UavToUav | LinkKind::GueToUav => 1.0,
        }
    }

    /// Large-scale fading `zeta = path loss / antenna gain` on a link at
    /// ground distance `r`, in the given propagation state.
    pub fn zeta(&self, link: LinkKind, state: LosState, r_m: f64) -> Result<f64> {
        let p = self.link_params(link, state);
        let (ht, hr) = self.heights(link);
        let pl = path_loss_linear(p.tau_hat_lin, p.alpha, dist_3d_m(r_m, ht, hr))?;
        let g = self.link_gain(link, r_m);
        if g <= 0.0 {
            return Err(AerolayError::Domain(format!(
                "zero antenna gain on {} at r = {r_m} m",
                link.name()
            )));
        }
        Ok(pl / g)
    }

    /// UAV power control; None when the mode allocates UAVs no PRBs.
    pub fn pc_uav(&self) -> Result<&PowerControl> {
        self.pc_uav.as_ref().ok_or_else(|| {
            bad(
                "eta_u",
                "eta_u = 0 allocates no PRBs to UAVs; U2U operations are undefined",
            )
        })
    }

    /// GUE power control; None when overlay reserves no PRBs for GUEs.
    pub fn pc_gue(&self) -> Result<&PowerControl> {
        self.pc_gue.as_ref().ok_or_else(|| {
            bad(
                "eta_u",
                "overlay with eta_u = 1 allocates no PRBs to GUEs; GUE operations are undefined",
            )
        })
    }

    /// Density of interfering UAV transmitters on the PRB observed by the
    /// given link class.
    pub fn interfering_uav_density(&self, observed: LinkClass) -> f64 {
        match (self.mode, observed) {
            (SharingMode::Underlay, _) => self.eta_u * self.lambda_u,
            (SharingMode::Overlay, LinkClass::U2u) => self.lambda_u,
            (SharingMode::Overlay, LinkClass::GueUl) => 0.0,
        }
    }

    /// Density of interfering GUEs on the PRB observed by the given link
    /// class (before any serving-BS exclusion).
    pub fn interfering_gue_density(&self, observed: LinkClass) -> f64 {
        match (self.mode, observed) {
            (SharingMode::Underlay, _) => self.lambda_g,
            (SharingMode::Overlay, LinkClass::U2u) => 0.0,
            (SharingMode::Overlay, LinkClass::GueUl) => self.lambda_g,
        }
    }

    /// Bandwidth accessed by the typical node of a link class, for the
    /// rate CCDF mapping. Errors when the mode allocates it no spectrum.
    pub fn bandwidth_hz(&self, link: LinkClass) -> Result<f64> {
        let n = match link {
            LinkClass::U2u => self.n_prbs_uav,
            LinkClass::GueUl => self.n_prbs_gue,
        };
        match n {
            Some(n) => Ok(n as f64 * self.prb_bandwidth_hz),
            None => Err(bad(
                "eta_u",
                format!(
                    "{} accesses no PRBs under {} with eta_u = {}",
                    link.name(),
                    self.mode.name(),
                    self.eta_u
                ),
            )),
        }
    }

    pub fn config_hash(&self) -> u64 {
        self.config_hash
    }

    #[cfg(test)]
    pub(crate) fn override_alpha_for_test(&mut self, link: LinkKind, state: LosState, alpha: f64) {
        let p = &mut self.params[link_index(link)];
        match state {
            LosState::Los => p.los.alpha = alpha,
            LosState::Nlos => p.nlos.alpha = alpha,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_config_derives() {
        let sc = ScenarioConfig::default().derive().unwrap();
        assert_eq!(sc.n_prbs, 50);
        assert!((sc.sigma_u_m - (2.0 / std::f64::consts::PI).sqrt() * 100.0).abs() < 1e-12);
        assert!((sc.sigma_g_m - 1.0 / (2.0 * std::f64::consts::PI * 5e-6).sqrt()).abs() < 1e-9);
        // auto field radius: 10/sqrt(pi * lambda_b) = 2523 m, floored at 5 km
        assert!((sc.field_radius_m - 5000.0).abs() < 1e-9);
        // eta 0.1 over 50 PRBs
        assert_eq!(sc.n_prbs_uav, Some(5));
        assert_eq!(sc.n_prbs_gue, Some(50));
    }

    #[test]
    fn derived_link_params_match_table_formulas() {
        let sc = ScenarioConfig::default().derive().unwrap();
        let uu_l = sc.link_params(LinkKind::UavToUav, LosState::Los);
        assert!((uu_l.alpha - 2.2).abs() < 1e-12);
        assert!((uu_l.tau_hat_lin - db_to_lin(28.0 + 20.0 * 2.0f64.log10())).abs() < 1e-9);
        assert_eq!(uu_l.m, 5);
        let uu_n = sc.link_params(LinkKind::UavToUav, LosState::Nlos);
        assert!((uu_n.alpha - 3.2).abs() < 1e-12);
        assert_eq!(uu_n.m, 1);
        let gu_l = sc.link_params(LinkKind::GueToUav, LosState::Los);
        assert!((gu_l.alpha - 2.125).abs() < 1e-12);
        assert_eq!(gu_l.m, 3);
        let gb_n = sc.link_params(LinkKind::GueToBs, LosState::Nlos);
        assert!((gb_n.alpha - 3.9).abs() < 1e-12);
    }

    #[test]
    fn eta_out_of_range_rejected() {
        let mut cfg = ScenarioConfig::default();
        cfg.eta_u = 1.5;
        match cfg.derive() {
            Err(AerolayError::Config { key, .. }) => assert_eq!(key, "eta_u"),
            other => panic!("expected config error, got {other:?}"),
        }
    }

    #[test]
    fn overlay_bandwidth_split() {
        let mut cfg = ScenarioConfig::default();
        cfg.sharing_mode = SharingMode::Overlay;
        cfg.eta_u = 0.1;
        let sc = cfg.derive().unwrap();
        assert!((sc.bandwidth_hz(LinkClass::GueUl).unwrap() - 9e6).abs() < 1e-6);
        assert!((sc.bandwidth_hz(LinkClass::U2u).unwrap() - 1e6).abs() < 1e-6);
    }

    #[test]
    fn degenerate_splits_error_for_excluded_party() {
        let mut cfg = ScenarioConfig::default();
        cfg.sharing_mode = SharingMode::Overlay;
        cfg.eta_u = 1.0;
        let sc = cfg.derive().unwrap();
        assert!(sc.bandwidth_hz(LinkClass::GueUl).is_err());
        assert!(sc.pc_gue().is_err());
        cfg.eta_u = 0.0;
        let sc = cfg.derive().unwrap();
        assert!(sc.bandwidth_hz(LinkClass::U2u).is_err());
        assert!(sc.bandwidth_hz(LinkClass::GueUl).is_ok());
    }

    #[test]
    fn effective_densities_by_mode() {
        let mut cfg = ScenarioConfig::default();
        cfg.eta_u = 0.4;
        let under = cfg.derive().unwrap();
        assert!((under.interfering_uav_density(LinkClass::U2u) - 0.4e-6).abs() < 1e-18);
        assert!((under.interfering_gue_density(LinkClass::U2u) - 5e-6).abs() < 1e-18);
        cfg.sharing_mode = SharingMode::Overlay;
        let over = cfg.derive().unwrap();
        assert_eq!(over.interfering_uav_density(LinkClass::GueUl), 0.0);
        assert_eq!(over.interfering_gue_density(LinkClass::U2u), 0.0);
        assert!((over.interfering_uav_density(LinkClass::U2u) - 1e-6).abs() < 1e-18);
    }

    #[test]
    fn zeta_includes_bs_pattern_only_on_bs_links() {
        let sc = ScenarioConfig::default().derive().unwrap();
        assert_eq!(sc.link_gain(LinkKind::UavToUav, 300.0), 1.0);
        assert_eq!(sc.link_gain(LinkKind::GueToUav, 300.0), 1.0);
        assert!(sc.link_gain(LinkKind::GueToBs, 110.0) > 1.0);
    }

    #[test]
    fn unknown_key_not_applied() {
        let mut cfg = ScenarioConfig::default();
        assert!(!cfg.apply_key("no_such_key", "1").unwrap());
        assert!(cfg.apply_key("eta_u", "0.3").unwrap());
        assert!((cfg.eta_u - 0.3).abs() < 1e-15);
        assert!(cfg.apply_key("eta_u", "abc").is_err());
    }
}
