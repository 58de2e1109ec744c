//! Drop campaigns and empirical estimates.

use rayon::prelude::*;

use crate::analytical::InterfererPopulation;
use crate::config::Scenario;
use crate::curve::{CoverageCurve, CurveKind, LinkClass};
use crate::error::Result;
use crate::montecarlo::drops::{population_interference, run_drop_gue_ul, run_drop_u2u};

/// One empirical probability with its binomial 95% confidence interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimEstimate {
    pub mean: f64,
    pub ci_halfwidth_95: f64,
    pub n_drops: u64,
    pub seed: u64,
}

fn binomial_ci(p: f64, n: u64) -> f64 {
    1.96 * (p * (1.0 - p) / n as f64).sqrt()
}

/// Per-PRB SINR samples of `n_drops` independent drops (index order,
/// independent of thread count).
pub fn sinr_samples(
    sc: &Scenario,
    link: LinkClass,
    n_drops: u64,
    seed: u64,
) -> Result<Vec<f64>> {
    // surface config errors once instead of per drop
    match link {
        LinkClass::U2u => {
            sc.pc_uav()?;
        }
        LinkClass::GueUl => {
            sc.pc_gue()?;
        }
    }
    (0..n_drops)
        .into_par_iter()
        .map(|i| match link {
            LinkClass::U2u => run_drop_u2u(sc, seed, i),
            LinkClass::GueUl => run_drop_gue_ul(sc, seed, i),
        })
        .collect()
}

/// Empirical CCDF of a fixed sample set at one linear threshold.
pub fn coverage_from_samples(samples: &[f64], t_lin: f64) -> f64 {
    samples.iter().filter(|&&s| s > t_lin).count() as f64 / samples.len() as f64
}

/// Empirical coverage probability at a threshold in dB.
pub fn estimate_coverage(
    sc: &Scenario,
    link: LinkClass,
    t_db: f64,
    n_drops: u64,
    seed: u64,
) -> Result<SimEstimate> {
    let samples = sinr_samples(sc, link, n_drops, seed)?;
    let mean = coverage_from_samples(&samples, crate::channel::db_to_lin(t_db));
    Ok(SimEstimate {
        mean,
        ci_halfwidth_95: binomial_ci(mean, n_drops),
        n_drops,
        seed,
    })
}

/// Empirical coverage curve over a threshold grid, one drop campaign.
pub fn mc_coverage_curve(
    sc: &Scenario,
    link: LinkClass,
    thresholds_db: &[f64],
    n_drops: u64,
    seed: u64,
) -> Result<CoverageCurve> {
    let samples = sinr_samples(sc, link, n_drops, seed)?;
    let probabilities: Vec<f64> = thresholds_db
        .iter()
        .map(|&t| coverage_from_samples(&samples, crate::channel::db_to_lin(t)))
        .collect();
    let ci = probabilities
        .iter()
        .map(|&p| binomial_ci(p, n_drops))
        .collect();
    Ok(CoverageCurve {
        thresholds_db: thresholds_db.to_vec(),
        probabilities,
        kind: CurveKind::MonteCarlo {
            n_drops,
            seed,
            ci_halfwidths: ci,
        },
        link,
        mode: sc.mode,
        config_hash: sc.config_hash(),
        field_radius_m: sc.field_radius_m,
    })
}

/// Empirical rate CCDF at `rate_bps` from a SINR sample set; the rate of
/// a drop is `B log2(1 + SINR)` with B the link's accessed bandwidth.
pub fn rate_ccdf_estimate(
    sc: &Scenario,
    link: LinkClass,
    samples: &[f64],
    rate_bps: f64,
    seed: u64,
) -> Result<SimEstimate> {
    let b = sc.bandwidth_hz(link)?;
    let t_lin = (rate_bps / b).exp2() - 1.0;
    let mean = coverage_from_samples(samples, t_lin);
    Ok(SimEstimate {
        mean,
        ci_halfwidth_95: binomial_ci(mean, samples.len() as u64),
        n_drops: samples.len() as u64,
        seed,
    })
}

/// Sample mean of `exp(-s I)` over drops for one interferer population,
/// at each of the supplied arguments (shared drops, index-ordered sum).
pub fn empirical_laplace(
    sc: &Scenario,
    pop: InterfererPopulation,
    s_values: &[f64],
    n_drops: u64,
    seed: u64,
) -> Result<Vec<f64>> {
    let interference: Vec<f64> = (0..n_drops)
        .into_par_iter()
        .map(|i| population_interference(sc, pop, seed, i))
        .collect::<Result<Vec<_>>>()?;
    Ok(s_values
        .iter()
        .map(|&s| {
            let acc: f64 = interference.iter().map(|&i| (-s * i).exp()).sum();
            acc / n_drops as f64
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::{ScenarioConfig, SharingMode};

    fn small_scenario() -> Scenario {
        let mut cfg = ScenarioConfig::default();
        // a small field keeps unit-test drops cheap
        cfg.field_radius_m = 1500.0;
        cfg.derive().unwrap()
    }

    #[test]
    fn estimates_are_deterministic() {
        let sc = small_scenario();
        let a = estimate_coverage(&sc, LinkClass::U2u, -5.0, 400, 11).unwrap();
        let b = estimate_coverage(&sc, LinkClass::U2u, -5.0, 400, 11).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn threshold_below_all_samples_gives_one() {
        let sc = small_scenario();
        let est = estimate_coverage(&sc, LinkClass::U2u, -200.0, 300, 5).unwrap();
        assert_eq!(est.mean, 1.0);
    }

    #[test]
    fn empirical_ccdf_non_increasing() {
        let sc = small_scenario();
        let grid: Vec<f64> = (-10..=30).step_by(2).map(|t| t as f64).collect();
        let curve = mc_coverage_curve(&sc, LinkClass::GueUl, &grid, 500, 3).unwrap();
        curve.validate().unwrap();
    }

    #[test]
    fn ci_shrinks_like_inverse_sqrt() {
        let sc = small_scenario();
        let a = estimate_coverage(&sc, LinkClass::U2u, -5.0, 2000, 7).unwrap();
        let b = estimate_coverage(&sc, LinkClass::U2u, -5.0, 4000, 7).unwrap();
        let ratio = b.ci_halfwidth_95 / a.ci_halfwidth_95;
        let expect = 1.0 / 2.0f64.sqrt();
        assert!(
            (ratio - expect).abs() / expect < 0.10,
            "CI ratio {ratio} vs {expect}"
        );
    }

    #[test]
    fn laplace_at_zero_and_empty_population() {
        let sc = small_scenario();
        let l = empirical_laplace(&sc, InterfererPopulation::UavAtUavRx, &[0.0], 50, 2).unwrap();
        assert_eq!(l[0], 1.0);
        let mut cfg = ScenarioConfig::default();
        cfg.sharing_mode = SharingMode::Overlay;
        cfg.field_radius_m = 1500.0;
        let sc = cfg.derive().unwrap();
        // overlay U2U PRBs host no GUEs
        let l =
            empirical_laplace(&sc, InterfererPopulation::GueAtUavRx, &[1e9], 50, 2).unwrap();
        assert_eq!(l[0], 1.0);
    }

    #[test]
    fn underlay_eta_zero_matches_overlay_gue_bitwise() {
        let mut under = ScenarioConfig::default();
        under.eta_u = 0.0;
        under.field_radius_m = 1500.0;
        let mut over = under.clone();
        over.sharing_mode = SharingMode::Overlay;
        let sc_u = under.derive().unwrap();
        let sc_o = over.derive().unwrap();
        let a = sinr_samples(&sc_u, LinkClass::GueUl, 200, 77).unwrap();
        let b = sinr_samples(&sc_o, LinkClass::GueUl, 200, 77).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.to_bits(), y.to_bits());
        }
    }

    #[test]
    fn overlay_gue_invariant_to_uav_process() {
        let mut base = ScenarioConfig::default();
        base.sharing_mode = SharingMode::Overlay;
        base.eta_u = 0.2;
        base.field_radius_m = 1500.0;
        let mut probe = base.clone();
        probe.lambda_u = 5e-6;
        probe.epsilon_u = 0.8;
        let sc_a = base.derive().unwrap();
        let sc_b = probe.derive().unwrap();
        let a = sinr_samples(&sc_a, LinkClass::GueUl, 200, 99).unwrap();
        let b = sinr_samples(&sc_b, LinkClass::GueUl, 200, 99).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.to_bits(), y.to_bits());
        }
    }

    #[test]
    fn thread_count_does_not_change_results() {
        let sc = small_scenario();
        let pools: Vec<rayon::ThreadPool> = [1usize, 4]
            .iter()
            .map(|&n| {
                rayon::ThreadPoolBuilder::new()
                    .num_threads(n)
                    .build()
                    .unwrap()
            })
            .collect();
        let runs: Vec<Vec<f64>> = pools
            .iter()
            .map(|pool| {
                pool.install(|| sinr_samples(&sc, LinkClass::GueUl, 300, 13).unwrap())
            })
            .collect();
        for (x, y) in runs[0].iter().zip(&runs[1]) {
            assert_eq!(x.to_bits(), y.to_bits());
        }
    }
}
