//! Semi-analytical SINR coverage.
//!
//! Coverage conditions on the serving geometry, expands the fading CCDF
//! through the fitted exponential mixture (an alternating binomial sum),
//! and multiplies the Laplace functionals of every interferer population
//! on the observed PRB, each population carrying both propagation
//! states. The U2U signal is evaluated LoS-only (the NLoS serving weight
//! is negligible at the modeled altitudes); the GUE uplink sums both
//! serving states.

use rayon::prelude::*;

use crate::analytical::laplace::{
    gue_power_atoms, tabulate_neg_log, KernelSpec, LaplaceKernel, PowerAtom, RadialShape,
    StateWeight, TabulatedLaplace, TxPowerLaw,
};
use crate::analytical::mean_power::mean_uav_tx_power_mw;
use crate::channel::{db_to_lin, LinkKind, LosState};
use crate::config::Scenario;
use crate::curve::{CoverageCurve, CurveKind, LinkClass};
use crate::error::{AerolayError, Result};
use crate::quad::{edges_with_breakpoints, integrate_piecewise, QuadTol};

// arguments past this make exp(-z * n0) underflow to zero, so no term
// can contribute no matter what the Laplace factor is
const EXP_UNDERFLOW: f64 = 745.0;

/// Both propagation states of one interferer population.
struct PopulationKernels<'a> {
    los: LaplaceKernel<'a>,
    nlos: LaplaceKernel<'a>,
}

impl PopulationKernels<'_> {
    fn neg_log(&self, z: f64) -> f64 {
        self.los.neg_log_laplace(z) + self.nlos.neg_log_laplace(z)
    }

    fn is_empty(&self) -> bool {
        self.los.density_per_m2() == 0.0 && self.nlos.density_per_m2() == 0.0
    }
}

/// Laplace-argument span seen by one coverage integration; populations
/// are tabulated over it once with a safety margin on both ends.
struct ZSpan {
    lo: f64,
    hi: f64,
    /// Arguments above this are annihilated by the noise factor.
    z_cap: f64,
}

impl ZSpan {
    fn new(noise_mw: f64) -> ZSpan {
        ZSpan {
            lo: f64::INFINITY,
            hi: 0.0,
            z_cap: if noise_mw > 0.0 {
                EXP_UNDERFLOW / noise_mw
            } else {
                f64::INFINITY
            },
        }
    }

    /// Folds in the i = 1 argument at every edge and edge midpoint;
    /// `m` scales the top of the span for the last binomial term.
    fn scan(&mut self, edges: &[f64], m: u32, z1_at: impl Fn(f64) -> Option<f64>) {
        let mut feed = |r: f64| {
            if r <= 0.0 {
                return;
            }
            if let Some(z1) = z1_at(r) {
                if z1.is_finite() && z1 > 0.0 {
                    self.lo = self.lo.min(z1.min(self.z_cap));
                    self.hi = self.hi.max((m as f64 * z1).min(self.z_cap));
                }
            }
        };
        for w in edges.windows(2) {
            feed(w[0]);
            feed(0.5 * (w[0] + w[1]));
            feed(w[1]);
        }
    }

    fn tabulate(&self, pop: &PopulationKernels<'_>) -> TabulatedLaplace {
        if pop.is_empty() || !self.lo.is_finite() || self.hi <= 0.0 {
            return TabulatedLaplace::default();
        }
        tabulate_neg_log(|z| pop.neg_log(z), self.lo / 32.0, self.hi * 32.0)
    }
}

pub(crate) fn binomial(m: u32, i: u32) -> f64 {
    let mut acc = 1.0;
    for k in 0..i.min(m - i) {
        acc = acc * (m - k) as f64 / (k + 1) as f64;
    }
    acc
}

/// One interferer population visible at a typical receiver.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InterfererPopulation {
    /// UAV transmitters at the typical U2U receiver.
    UavAtUavRx,
    /// GUEs at the typical U2U receiver.
    GueAtUavRx,
    /// UAV transmitters at the typical BS.
    UavAtBs,
    /// GUEs at the typical BS.
    GueAtBs,
}

impl InterfererPopulation {
    pub const ALL: [InterfererPopulation; 4] = [
        InterfererPopulation::UavAtUavRx,
        InterfererPopulation::GueAtUavRx,
        InterfererPopulation::UavAtBs,
        InterfererPopulation::GueAtBs,
    ];

    pub fn name(self) -> &'static str {
        match self {
            InterfererPopulation::UavAtUavRx => "uav_at_uav_rx",
            InterfererPopulation::GueAtUavRx => "gue_at_uav_rx",
            InterfererPopulation::UavAtBs => "uav_at_bs",
            InterfererPopulation::GueAtBs => "gue_at_bs",
        }
    }
}

/// The semi-analytical evaluator; immutable and shareable across threads.
pub struct Engine<'a> {
    sc: &'a Scenario,
    mean_uav_power_mw: Option<f64>,
    gue_atoms: Vec<PowerAtom>,
}

const ATOMS_PER_STATE: usize = 64;

impl<'a> Engine<'a> {
    pub fn new(sc: &'a Scenario) -> Result<Engine<'a>> {
        let mean_uav_power_mw = match sc.pc_uav() {
            Ok(_) => Some(mean_uav_tx_power_mw(sc)?),
            Err(_) => None,
        };
        let gue_atoms = match sc.pc_gue() {
            Ok(_) => gue_power_atoms(sc, ATOMS_PER_STATE)?,
            Err(_) => Vec::new(),
        };
        Ok(Engine {
            sc,
            mean_uav_power_mw,
            gue_atoms,
        })
    }

    pub fn scenario(&self) -> &Scenario {
        self.sc
    }

    /// Mean UAV transmit power per PRB (mW), the fixed interferer power
    /// of the UAV populations.
    pub fn mean_uav_tx_power_mw(&self) -> Result<f64> {
        self.mean_uav_power_mw
            .ok_or_else(|| AerolayError::Domain("UAVs hold no PRBs (eta_u = 0)".into()))
    }

    fn state_kernel(
        &self,
        rx: LinkClass,
        tx_is_uav: bool,
        state: LosState,
        density: f64,
    ) -> Result<LaplaceKernel<'_>> {
        let link = match (tx_is_uav, rx) {
            (true, LinkClass::U2u) => LinkKind::UavToUav,
            (true, LinkClass::GueUl) => LinkKind::UavToBs,
            (false, LinkClass::U2u) => LinkKind::GueToUav,
            (false, LinkClass::GueUl) => LinkKind::GueToBs,
        };
        let power = if tx_is_uav {
            TxPowerLaw::Fixed(if density > 0.0 {
                self.mean_uav_tx_power_mw()?
            } else {
                0.0
            })
        } else {
            if density > 0.0 && self.gue_atoms.is_empty() {
                return Err(AerolayError::Domain(
                    "GUE interferer ensemble unavailable (GUEs hold no PRBs)".into(),
                ));
            }
            TxPowerLaw::Atoms {
                atoms: &self.gue_atoms,
                // serving-law conditioning applies at the typical BS only
                truncate_at_radius: link == LinkKind::GueToBs,
            }
        };
        let shape = if link == LinkKind::GueToBs {
            RadialShape::NearestBsExcluded {
                lambda_b: self.sc.lambda_b,
            }
        } else {
            RadialShape::Uniform
        };
        LaplaceKernel::new(
            self.sc,
            KernelSpec {
                density_per_m2: density,
                shape,
                link,
                state,
                state_weight: match state {
                    LosState::Los => StateWeight::StepLos,
                    LosState::Nlos => StateWeight::StepNlos,
                },
                power,
                exclusion_radius_m: 0.0,
                field_radius_m: self.sc.field_radius_m,
            },
        )
    }

    fn population(
        &self,
        rx: LinkClass,
        tx_is_uav: bool,
        density: f64,
    ) -> Result<PopulationKernels<'_>> {
        Ok(PopulationKernels {
            los: self.state_kernel(rx, tx_is_uav, LosState::Los, density)?,
            nlos: self.state_kernel(rx, tx_is_uav, LosState::Nlos, density)?,
        })
    }

    /// The Laplace functional `E[e^{-z I}]` of a single population at
    /// argument `z` (1/mW), both propagation states, densities resolved
    /// from the sharing mode.
    pub fn interference_laplace(&self, pop: InterfererPopulation, z_per_mw: f64) -> Result<f64> {
        if z_per_mw < 0.0 {
            return Err(AerolayError::Domain(format!(
                "Laplace argument must be non-negative, got {z_per_mw}"
            )));
        }
        let sc = self.sc;
        let p = match pop {
            InterfererPopulation::UavAtUavRx => {
                self.population(LinkClass::U2u, true, sc.interfering_uav_density(LinkClass::U2u))?
            }
            InterfererPopulation::GueAtUavRx => self.population(
                LinkClass::U2u,
                false,
                sc.interfering_gue_density(LinkClass::U2u),
            )?,
            InterfererPopulation::UavAtBs => self.population(
                LinkClass::GueUl,
                true,
                sc.interfering_uav_density(LinkClass::GueUl),
            )?,
            InterfererPopulation::GueAtBs => self.population(
                LinkClass::GueUl,
                false,
                sc.interfering_gue_density(LinkClass::GueUl),
            )?,
        };
        Ok((-p.neg_log(z_per_mw)).exp())
    }

    /// U2U coverage probability at a linear SINR threshold, with explicit
    /// interferer densities (the mode-resolved entry point is
    /// [`Engine::coverage`]). Setting `gue_density = 0` drops the GUE
    /// factor entirely.
    pub fn u2u_coverage_lin_with(
        &self,
        t_lin: f64,
        gue_density: f64,
        uav_density: f64,
    ) -> Result<f64> {
        let sc = self.sc;
        let pc = *sc.pc_uav()?;
        let p_uu = *sc.link_params(LinkKind::UavToUav, LosState::Los);
        let table = sc.los_table(LinkKind::UavToUav);
        let uav_pop = self.population(LinkClass::U2u, true, uav_density)?;
        let gue_pop = self.population(LinkClass::U2u, false, gue_density)?;
        let n0 = sc.noise_mw_per_prb;
        let sigma_sq2 = 2.0 * sc.sigma_u_m * sc.sigma_u_m;
        let norm = sc.sigma_u_m * sc.sigma_u_m
            * (1.0 - (-sc.r_max_u2u_m * sc.r_max_u2u_m / sigma_sq2).exp());

        let sat = pc.saturation_distance_m(p_uu.tau_hat_lin, p_uu.alpha, 1.0);
        let mut cuts = table.breakpoints_in(0.0, sc.r_max_u2u_m);
        cuts.push(sat);
        let edges = edges_with_breakpoints(0.0, sc.r_max_u2u_m, &cuts);

        let mut span = ZSpan::new(n0);
        span.scan(&edges, p_uu.m, |r| {
            let zeta = sc.zeta(LinkKind::UavToUav, LosState::Los, r).ok()?;
            Some(p_uu.b * t_lin * zeta / pc.tx_power_mw(zeta))
        });
        let uav_tab = span.tabulate(&uav_pop);
        let gue_tab = span.tabulate(&gue_pop);

        let integrand = |r_u: f64| -> f64 {
            if r_u <= 0.0 {
                return 0.0;
            }
            let p_los = table.los_probability(r_u).unwrap();
            let f_l = r_u * (-r_u * r_u / sigma_sq2).exp() / norm * p_los;
            if f_l == 0.0 {
                return 0.0;
            }
            let zeta = match sc.zeta(LinkKind::UavToUav, LosState::Los, r_u) {
                Ok(v) => v,
                Err(_) => return 0.0,
            };
            let p_sig = pc.tx_power_mw(zeta);
            let mut cond = 0.0;
            for i in 1..=p_uu.m {
                let z = i as f64 * p_uu.b * t_lin * zeta / p_sig;
                if z * n0 > EXP_UNDERFLOW {
                    continue;
                }
                let nll = uav_tab.neg_log(z) + gue_tab.neg_log(z) + z * n0;
                let sign = if i % 2 == 1 { 1.0 } else { -1.0 };
                cond += sign * binomial(p_uu.m, i) * (-nll).exp();
            }
            f_l * cond
        };

        let cov = integrate_piecewise(integrand, &edges, QuadTol::default());
        Ok(cov.clamp(0.0, 1.0))
    }

    /// GUE uplink coverage at a linear SINR threshold with an explicit
    /// interfering-UAV density (`0` removes the UAV factor).
    pub fn gue_coverage_lin_with(&self, t_lin: f64, uav_density: f64) -> Result<f64> {
        let sc = self.sc;
        let pc = *sc.pc_gue()?;
        let table = sc.los_table(LinkKind::GueToBs);
        let gue_density = sc.interfering_gue_density(LinkClass::GueUl);
        let uav_pop = self.population(LinkClass::GueUl, true, uav_density)?;
        let gue_pop = self.population(LinkClass::GueUl, false, gue_density)?;
        let n0 = sc.noise_mw_per_prb;
        let lb_pi = sc.lambda_b * std::f64::consts::PI;
        // serving-distance density is spent by ~1.4 km at urban BS density
        let r_up = (f64::ln(1e16) / lb_pi).sqrt().min(sc.field_radius_m);

        // per-state edge lists plus one shared z-span for the kernels
        let state_edges = LosState::BOTH.map(|state| {
            let p_gb = sc.link_params(LinkKind::GueToBs, state);
            let mut cuts = table.breakpoints_in(0.0, r_up);
            cuts.extend(sc.antenna.feature_radii(sc.h_g_m - sc.h_b_m, r_up));
            // the signal power law kinks where the cap engages; the kink
            // radius depends on the antenna gain, so bracket with the
            // gain-free estimate and its boresight-boosted variant
            cuts.push(pc.saturation_distance_m(p_gb.tau_hat_lin, p_gb.alpha, 1.0));
            cuts.push(pc.saturation_distance_m(
                p_gb.tau_hat_lin,
                p_gb.alpha,
                sc.antenna.n_elements as f64 * sc.antenna.element_gain_max_lin,
            ));
            edges_with_breakpoints(0.0, r_up, &cuts)
        });
        let mut span = ZSpan::new(n0);
        for (state, edges) in LosState::BOTH.iter().zip(&state_edges) {
            let p_gb = sc.link_params(LinkKind::GueToBs, *state);
            span.scan(edges, p_gb.m, |r| {
                let zeta = sc.zeta(LinkKind::GueToBs, *state, r).ok()?;
                Some(p_gb.b * t_lin * zeta / pc.tx_power_mw(zeta))
            });
        }
        let uav_tab = span.tabulate(&uav_pop);
        let gue_tab = span.tabulate(&gue_pop);

        let mut total = 0.0;
        for (state, edges) in LosState::BOTH.into_iter().zip(&state_edges) {
            let p_gb = *sc.link_params(LinkKind::GueToBs, state);
            let integrand = |r_g: f64| -> f64 {
                if r_g <= 0.0 {
                    return 0.0;
                }
                let p_state = match state {
                    LosState::Los => table.los_probability(r_g).unwrap(),
                    LosState::Nlos => table.nlos_probability(r_g).unwrap(),
                };
                let f_nu = 2.0 * lb_pi * r_g * (-lb_pi * r_g * r_g).exp() * p_state;
                if f_nu == 0.0 {
                    return 0.0;
                }
                let zeta = match sc.zeta(LinkKind::GueToBs, state, r_g) {
                    Ok(v) => v,
                    // an exact antenna null carries no signal
                    Err(_) => return 0.0,
                };
                let p_sig = pc.tx_power_mw(zeta);
                let mut cond = 0.0;
                for i in 1..=p_gb.m {
                    let z = i as f64 * p_gb.b * t_lin * zeta / p_sig;
                    if z * n0 > EXP_UNDERFLOW {
                        continue;
                    }
                    let nll = uav_tab.neg_log(z) + gue_tab.neg_log(z) + z * n0;
                    let sign = if i % 2 == 1 { 1.0 } else { -1.0 };
                    cond += sign * binomial(p_gb.m, i) * (-nll).exp();
                }
                f_nu * cond
            };
            total += integrate_piecewise(integrand, edges, QuadTol::default());
        }
        Ok(total.clamp(0.0, 1.0))
    }

    /// Coverage probability at a linear SINR threshold under the
    /// scenario's sharing mode.
    pub fn coverage_lin(&self, link: LinkClass, t_lin: f64) -> Result<f64> {
        let sc = self.sc;
        match link {
            LinkClass::U2u => self.u2u_coverage_lin_with(
                t_lin,
                sc.interfering_gue_density(LinkClass::U2u),
                sc.interfering_uav_density(LinkClass::U2u),
            ),
            LinkClass::GueUl => {
                self.gue_coverage_lin_with(t_lin, sc.interfering_uav_density(LinkClass::GueUl))
            }
        }
    }

    /// Coverage probability at a threshold in dB.
    pub fn coverage(&self, link: LinkClass, t_db: f64) -> Result<f64> {
        self.coverage_lin(link, db_to_lin(t_db))
    }

    /// CCDF of the achievable rate at `rate_bps`, via the coverage at
    /// SINR threshold `2^(T/B) - 1` with B the bandwidth the node
    /// accesses under the sharing mode.
    pub fn rate_ccdf(&self, link: LinkClass, rate_bps: f64) -> Result<f64> {
        if rate_bps < 0.0 {
            return Err(AerolayError::Domain(format!(
                "rate threshold must be non-negative, got {rate_bps}"
            )));
        }
        let b = self.sc.bandwidth_hz(link)?;
        let t_lin = (rate_bps / b).exp2() - 1.0;
        self.coverage_lin(link, t_lin)
    }

    /// Evaluates a whole coverage curve, one threshold per grid point,
    /// thresholds in parallel.
    pub fn coverage_curve(&self, link: LinkClass, thresholds_db: &[f64]) -> Result<CoverageCurve>
    where
        Self: Sync,
    {
        let probabilities = thresholds_db
            .par_iter()
            .map(|&t| self.coverage(link, t))
            .collect::<Result<Vec<_>>>()?;
        Ok(CoverageCurve {
            thresholds_db: thresholds_db.to_vec(),
            probabilities,
            kind: CurveKind::Analytical,
            link,
            mode: self.sc.mode,
            config_hash: self.sc.config_hash(),
            field_radius_m: self.sc.field_radius_m,
        })
    }
}
