//! Interference Laplace functionals of Poisson interferer fields.
//!
//! For a field of density `lambda * shape(r)` whose members transmit
//! power `P` over a link with large-scale loss `zeta(r)` and integer
//! Nakagami parameter `m`, the Laplace functional at argument `z` is
//!
//! ```text
//! L(z) = exp(-2 pi lambda int shape(r) w(r) E_P[1 - (1 + z P / (m zeta(r)))^-m] r dr)
//! ```
//!
//! where `w(r)` is the step LoS (or NLoS) weight of the interfering link
//! and the fading expectation uses the exact Nakagami moment. GUE
//! interferers carry a power ensemble derived from their own serving-link
//! law; at the typical BS that law is conditioned on the serving distance
//! not exceeding the interferer radius.

use crate::channel::{LinkKind, LosState};
use crate::config::Scenario;
use crate::error::{AerolayError, Result};
use crate::quad::{edges_with_breakpoints, integrate_piecewise, QuadTol};

/// One (serving distance, probability mass, power) atom of the GUE
/// transmit-power ensemble.
#[derive(Debug, Clone, Copy)]
pub struct PowerAtom {
    pub serving_r_m: f64,
    pub weight: f64,
    pub p_mw: f64,
}

/// Discretizes the GUE power-control law over the Rayleigh serving
/// distance and both serving-link states: quantile midpoints per state,
/// so cumulative weights reproduce the serving-distance CDF.
pub fn gue_power_atoms(sc: &Scenario, per_state: usize) -> Result<Vec<PowerAtom>> {
    let pc = sc.pc_gue()?;
    let table = sc.los_table(LinkKind::GueToBs);
    let mut atoms = Vec::with_capacity(2 * per_state);
    for k in 0..per_state {
        let u = (k as f64 + 0.5) / per_state as f64;
        let r = sc.sigma_g_m * (-2.0 * (1.0 - u).ln()).sqrt();
        let p_los = table.los_probability(r)?;
        for (state, pr) in [(LosState::Los, p_los), (LosState::Nlos, 1.0 - p_los)] {
            if pr == 0.0 {
                continue;
            }
            // a serving GUE sitting exactly in an antenna null is capped
            let p_mw = match sc.zeta(LinkKind::GueToBs, state, r) {
                Ok(zeta) => pc.tx_power_mw(zeta),
                Err(_) => pc.cap_mw,
            };
            atoms.push(PowerAtom {
                serving_r_m: r,
                weight: pr / per_state as f64,
                p_mw,
            });
        }
    }
    atoms.sort_by(|a, b| a.serving_r_m.partial_cmp(&b.serving_r_m).unwrap());
    Ok(atoms)
}

/// Interferer transmit-power law inside a kernel.
#[derive(Debug, Clone, Copy)]
pub enum TxPowerLaw<'a> {
    /// All interferers at one power (the mean UAV power).
    Fixed(f64),
    /// Ensemble of atoms sorted by serving distance;
    /// `truncate_at_radius` keeps only atoms whose serving distance is
    /// below the interferer radius (renormalized), the serving-law
    /// conditioning seen at the typical BS.
    Atoms {
        atoms: &'a [PowerAtom],
        truncate_at_radius: bool,
    },
}

/// Radial density shape multiplying the base density.
#[derive(Debug, Clone, Copy)]
pub enum RadialShape {
    Uniform,
    /// `1 - exp(-lambda_b pi r^2)`: GUEs whose serving BS is not the
    /// typical one.
    NearestBsExcluded { lambda_b: f64 },
}

/// Step weight applied to the interfering link's propagation state.
#[derive(Debug, Clone, Copy)]
pub enum StateWeight {
    StepLos,
    StepNlos,
    One,
}

/// Construction parameters of one population kernel.
#[derive(Clone, Copy)]
pub struct KernelSpec<'a> {
    /// Base density (per m^2) multiplying `2 pi`.
    pub density_per_m2: f64,
    pub shape: RadialShape,
    pub link: LinkKind,
    pub state: LosState,
    pub state_weight: StateWeight,
    pub power: TxPowerLaw<'a>,
    pub exclusion_radius_m: f64,
    pub field_radius_m: f64,
}

/// A parameterized integrand describing one interferer population's
/// contribution to the interference Laplace functional. Validated and
/// edge-partitioned at construction; evaluation is infallible.
pub struct LaplaceKernel<'a> {
    sc: &'a Scenario,
    spec: KernelSpec<'a>,
    edges: Vec<f64>,
}

impl<'a> LaplaceKernel<'a> {
    /// Validates integrability and precomputes the piecewise-smooth
    /// partition (LoS cells, antenna features, power-ensemble radii).
    pub fn new(sc: &'a Scenario, spec: KernelSpec<'a>) -> Result<LaplaceKernel<'a>> {
        let p = sc.link_params(spec.link, spec.state);
        if p.alpha <= 2.0 {
            return Err(AerolayError::NonConvergent {
                link: spec.link.name(),
                state: spec.state.name(),
                alpha: p.alpha,
            });
        }
        let lo = spec.exclusion_radius_m;
        let hi = spec.field_radius_m;
        let mut cuts = sc.los_table(spec.link).breakpoints_in(lo, hi);
        let (h_tx, h_rx) = sc.heights(spec.link);
        if matches!(spec.link, LinkKind::UavToBs | LinkKind::GueToBs) {
            cuts.extend(sc.antenna.feature_radii(h_tx - h_rx, hi));
        }
        if let TxPowerLaw::Atoms {
            atoms,
            truncate_at_radius: true,
        } = spec.power
        {
            cuts.extend(atoms.iter().map(|a| a.serving_r_m));
        }
        let edges = edges_with_breakpoints(lo, hi, &cuts);
        Ok(LaplaceKernel { sc, spec, edges })
    }

    /// `-log L(z)`; zero when the population is empty or `z = 0`.
    pub fn neg_log_laplace(&self, z_per_mw: f64) -> f64 {
        debug_assert!(z_per_mw >= 0.0);
        if self.spec.density_per_m2 == 0.0 || z_per_mw == 0.0 {
            return 0.0;
        }
        let integral = integrate_piecewise(
            |r| self.integrand(r, z_per_mw),
            &self.edges,
            QuadTol::default(),
        );
        2.0 * std::f64::consts::PI * self.spec.density_per_m2 * integral
    }

    /// The Laplace functional `E[e^{-z I}]` of this population.
    pub fn laplace(&self, z_per_mw: f64) -> f64 {
        (-self.neg_log_laplace(z_per_mw)).exp()
    }

    fn integrand(&self, r: f64, z: f64) -> f64 {
        if r <= 0.0 {
            return 0.0;
        }
        let sc = self.sc;
        let spec = &self.spec;
        let w = match spec.state_weight {
            StateWeight::StepLos => sc.los_table(spec.link).los_probability(r).unwrap(),
            StateWeight::StepNlos => sc.los_table(spec.link).nlos_probability(r).unwrap(),
            StateWeight::One => 1.0,
        };
        if w == 0.0 {
            return 0.0;
        }
        let shape = match spec.shape {
            RadialShape::Uniform => 1.0,
            RadialShape::NearestBsExcluded { lambda_b } => {
                1.0 - (-lambda_b * std::f64::consts::PI * r * r).exp()
            }
        };
        if shape == 0.0 {
            return 0.0;
        }
        let zeta = match sc.zeta(spec.link, spec.state, r) {
            Ok(v) => v,
            // antenna null: no power arrives from this radius
            Err(_) => return 0.0,
        };
        let m = sc.link_params(spec.link, spec.state).m;
        let fade = |p_mw: f64| -> f64 {
            let c = z * p_mw / (m as f64 * zeta);
            1.0 - (1.0 + c).powi(-(m as i32))
        };
        let expectation = match spec.power {
            TxPowerLaw::Fixed(p_mw) => fade(p_mw),
            TxPowerLaw::Atoms {
                atoms,
                truncate_at_radius,
            } => {
                let mut num = 0.0;
                let mut mass = 0.0;
                for a in atoms {
                    if truncate_at_radius && a.serving_r_m > r {
                        break;
                    }
                    num += a.weight * fade(a.p_mw);
                    mass += a.weight;
                }
                if mass == 0.0 {
                    return 0.0;
                }
                num / mass
            }
        };
        shape * w * expectation * r
    }
}

/// `-log L` of one kernel tabulated on a log-spaced argument grid with
/// monotone cubic interpolation, so coverage integrands can evaluate the
/// functional thousands of times at the cost of a few hundred exact
/// kernel quadratures.
#[derive(Debug, Clone, Default)]
pub struct TabulatedLaplace {
    ln_z: Vec<f64>,
    ln_nll: Vec<f64>,
    slopes: Vec<f64>,
}

/// Tabulates an arbitrary `-log L` function over `[z_lo, z_hi]` (node
/// count scales with the span).
pub fn tabulate_neg_log(
    neg_log: impl Fn(f64) -> f64,
    z_lo: f64,
    z_hi: f64,
) -> TabulatedLaplace {
    let z_lo = z_lo.max(1e-300);
    let z_hi = z_hi.max(z_lo * 1.0001);
    let decades = (z_hi / z_lo).log10();
    let n = ((24.0 * decades).ceil() as usize).clamp(48, 800);
    let ln_lo = z_lo.ln();
    let step = (z_hi.ln() - ln_lo) / (n - 1) as f64;
    let ln_z: Vec<f64> = (0..n).map(|i| ln_lo + i as f64 * step).collect();
    let ln_nll: Vec<f64> = ln_z
        .iter()
        .map(|&lz| neg_log(lz.exp()).max(1e-300).ln())
        .collect();
    let slopes = pchip_slopes(&ln_z, &ln_nll);
    TabulatedLaplace {
        ln_z,
        ln_nll,
        slopes,
    }
}

impl LaplaceKernel<'_> {
    /// Tabulates this kernel's `-log L`. An empty table stands in for an
    /// empty population.
    pub fn tabulate(&self, z_lo: f64, z_hi: f64) -> TabulatedLaplace {
        if self.spec.density_per_m2 == 0.0 {
            return TabulatedLaplace::default();
        }
        tabulate_neg_log(|z| self.neg_log_laplace(z), z_lo, z_hi)
    }

    pub fn density_per_m2(&self) -> f64 {
        self.spec.density_per_m2
    }
}

impl TabulatedLaplace {
    pub fn is_empty(&self) -> bool {
        self.ln_z.is_empty()
    }

    /// Interpolated `-log L(z)`; clamps outside the tabulated span (the
    /// high end only matters where the noise factor already vanishes).
    pub fn neg_log(&self, z: f64) -> f64 {
        if self.is_empty() || z <= 0.0 {
            return 0.0;
        }
        let lz = z.ln();
        let n = self.ln_z.len();
        if lz <= self.ln_z[0] {
            return self.ln_nll[0].exp();
        }
        if lz >= self.ln_z[n - 1] {
            return self.ln_nll[n - 1].exp();
        }
        let k = match self
            .ln_z
            .binary_search_by(|x| x.partial_cmp(&lz).unwrap())
        {
            Ok(i) => i.min(n - 2),
            Err(i) => i - 1,
        };
        let h = self.ln_z[k + 1] - self.ln_z[k];
        let t = (lz - self.ln_z[k]) / h;
        let (y0, y1) = (self.ln_nll[k], self.ln_nll[k + 1]);
        let (d0, d1) = (self.slopes[k], self.slopes[k + 1]);
        let t2 = t * t;
        let t3 = t2 * t;
        let v = y0 * (2.0 * t3 - 3.0 * t2 + 1.0)
            + d0 * h * (t3 - 2.0 * t2 + t)
            + y1 * (-2.0 * t3 + 3.0 * t2)
            + d1 * h * (t3 - t2);
        v.exp()
    }

    pub fn laplace(&self, z: f64) -> f64 {
        (-self.neg_log(z)).exp()
    }
}

// Fritsch-Carlson monotone slopes.
fn pchip_slopes(x: &[f64], y: &[f64]) -> Vec<f64> {
    let n = x.len();
    if n < 2 {
        return vec![0.0; n];
    }
    let h: Vec<f64> = x.windows(2).map(|w| w[1] - w[0]).collect();
    let delta: Vec<f64> = (0..n - 1).map(|i| (y[i + 1] - y[i]) / h[i]).collect();
    let mut d = vec![0.0; n];
    d[0] = delta[0];
    d[n - 1] = delta[n - 2];
    for i in 1..n - 1 {
        if delta[i - 1] * delta[i] <= 0.0 {
            d[i] = 0.0;
        } else {
            let w1 = 2.0 * h[i] + h[i - 1];
            let w2 = h[i] + 2.0 * h[i - 1];
            d[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
        }
    }
    d
}
