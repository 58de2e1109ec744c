//! Figure-reproduction runners and the generic sweep.

use std::path::{Path, PathBuf};

use crate::analytical::Engine;
use crate::channel::db_to_lin;
use crate::config::{ScenarioConfig, SharingMode};
use crate::curve::LinkClass;
use crate::error::Result;
use crate::experiments::output::{fmt_sig9, write_long_csv, Row};
use crate::experiments::{EngineChoice, ExperimentSpec, SweepVariable};
use crate::montecarlo;

const T_GRID_LO: i32 = -10;
const T_GRID_HI: i32 = 30;

fn t_grid() -> Vec<f64> {
    (T_GRID_LO..=T_GRID_HI).map(|t| t as f64).collect()
}

/// log-spaced rate grid, 8 points per decade over [10 kbps, 100 Mbps];
/// hits 100 kbps exactly.
fn rate_grid() -> Vec<f64> {
    (0..=32).map(|k| 10f64.powf(4.0 + k as f64 / 8.0)).collect()
}

const COMBOS: [(f64, f64); 4] = [(0.6, 1e-6), (0.6, 5e-6), (0.8, 1e-6), (0.8, 5e-6)];

/// Outcome of the validation run: the largest analytical-vs-simulation
/// coverage gap over both links and the full threshold grid.
#[derive(Debug)]
pub struct Fig2Report {
    pub max_gap: f64,
    pub files: Vec<PathBuf>,
}

/// Coverage vs threshold for both links in the full-reuse underlay
/// (eta_u = 1), analytical and Monte Carlo side by side. One CSV per
/// link: `t_db,analytical,montecarlo,ci`.
pub fn run_fig2(spec: &ExperimentSpec, out_prefix: &str) -> Result<Fig2Report> {
    let mut cfg = spec.scenario.clone();
    cfg.sharing_mode = SharingMode::Underlay;
    cfg.eta_u = 1.0;
    let sc = cfg.derive()?;
    let eng = Engine::new(&sc)?;
    let grid = t_grid();
    let mut max_gap = 0.0f64;
    let mut files = Vec::new();
    for link in [LinkClass::U2u, LinkClass::GueUl] {
        let ana = eng.coverage_curve(link, &grid)?;
        let mc = montecarlo::mc_coverage_curve(&sc, link, &grid, spec.mc.n_drops, spec.mc.seed)?;
        let ci = match &mc.kind {
            crate::curve::CurveKind::MonteCarlo { ci_halfwidths, .. } => ci_halfwidths.clone(),
            _ => unreachable!(),
        };
        let path = PathBuf::from(format!("{out_prefix}_fig2_{}.csv", link.name()));
        let mut w = csv::Writer::from_path(&path)?;
        w.write_record(["t_db", "analytical", "montecarlo", "ci"])?;
        for i in 0..grid.len() {
            let gap = (ana.probabilities[i] - mc.probabilities[i]).abs();
            max_gap = max_gap.max(gap);
            w.write_record([
                fmt_sig9(grid[i]),
                fmt_sig9(ana.probabilities[i]),
                fmt_sig9(mc.probabilities[i]),
                fmt_sig9(ci[i]),
            ])?;
        }
        w.flush()?;
        files.push(path);
    }
    Ok(Fig2Report { max_gap, files })
}

fn coverage_rows<'a>(
    cfg: &ScenarioConfig,
    grid_value: f64,
    t_db: f64,
    engines: EngineChoice,
    mc: crate::experiments::McParams,
    extra: &[(&'a str, String)],
    rows: &mut Vec<Row<'a>>,
) -> Result<()> {
    let sc = cfg.derive()?;
    for link in [LinkClass::U2u, LinkClass::GueUl] {
        // skip links the mode allocates no spectrum to
        if sc.bandwidth_hz(link).is_err() {
            continue;
        }
        if engines.analytical() {
            let eng = Engine::new(&sc)?;
            rows.push(Row {
                grid_value,
                link: link.name(),
                mode: sc.mode.name(),
                engine: "analytical",
                value: eng.coverage(link, t_db)?,
                ci: None,
                extra: extra.to_vec(),
            });
        }
        if engines.montecarlo() {
            let est = montecarlo::estimate_coverage(&sc, link, t_db, mc.n_drops, mc.seed)?;
            rows.push(Row {
                grid_value,
                link: link.name(),
                mode: sc.mode.name(),
                engine: "mc",
                value: est.mean,
                ci: Some(est.ci_halfwidth_95),
                extra: extra.to_vec(),
            });
        }
    }
    Ok(())
}

/// Coverage at T = -5 dB versus the underlay spectrum access factor, for
/// all four (epsilon_u, lambda_u) combinations and both links.
pub fn run_fig3(spec: &ExperimentSpec, out_prefix: &str) -> Result<PathBuf> {
    let eta_grid: Vec<f64> = (1..=10).map(|k| k as f64 / 10.0).collect();
    let mut rows = Vec::new();
    for &(eps, lam) in &COMBOS {
        for &eta in &eta_grid {
            let mut cfg = spec.scenario.clone();
            cfg.sharing_mode = SharingMode::Underlay;
            cfg.epsilon_u = eps;
            cfg.lambda_u = lam;
            cfg.eta_u = eta;
            let extra = vec![
                ("epsilon_u", fmt_sig9(eps)),
                ("lambda_u", fmt_sig9(lam)),
            ];
            coverage_rows(&cfg, eta, -5.0, spec.engines, spec.mc, &extra, &mut rows)?;
        }
    }
    let path = PathBuf::from(format!("{out_prefix}_fig3.csv"));
    write_long_csv(&path, "eta_u", &rows)?;
    Ok(path)
}

/// Rate CCDFs at eta_u = 0.1 for the GUE uplink and the U2U link under
/// both sharing modes and all four (epsilon_u, lambda_u) combinations.
/// One CSV per link; the 100 kbps command-and-control abscissa is
/// flagged in its own column.
pub fn run_fig45(spec: &ExperimentSpec, out_prefix: &str) -> Result<Vec<PathBuf>> {
    let grid = rate_grid();
    let mut files = Vec::new();
    for (fig, link) in [("fig4", LinkClass::GueUl), ("fig5", LinkClass::U2u)] {
        let mut rows = Vec::new();
        for mode in [SharingMode::Underlay, SharingMode::Overlay] {
            for &(eps, lam) in &COMBOS {
                let mut cfg = spec.scenario.clone();
                cfg.sharing_mode = mode;
                cfg.eta_u = 0.1;
                cfg.epsilon_u = eps;
                cfg.lambda_u = lam;
                let sc = cfg.derive()?;
                let extra_base = vec![
                    ("epsilon_u", fmt_sig9(eps)),
                    ("lambda_u", fmt_sig9(lam)),
                ];
                let mark = |r: f64| {
                    let mut e = extra_base.clone();
                    e.push((
                        "at_3gpp_100kbps",
                        if (r - 1e5).abs() < 1e-6 { "1" } else { "0" }.to_string(),
                    ));
                    e
                };
                if spec.engines.analytical() {
                    let eng = Engine::new(&sc)?;
                    for &r in &grid {
                        rows.push(Row {
                            grid_value: r,
                            link: link.name(),
                            mode: mode.name(),
                            engine: "analytical",
                            value: eng.rate_ccdf(link, r)?,
                            ci: None,
                            extra: mark(r),
                        });
                    }
                }
                if spec.engines.montecarlo() {
                    let samples =
                        montecarlo::sinr_samples(&sc, link, spec.mc.n_drops, spec.mc.seed)?;
                    for &r in &grid {
                        let est = montecarlo::rate_ccdf_estimate(
                            &sc,
                            link,
                            &samples,
                            r,
                            spec.mc.seed,
                        )?;
                        rows.push(Row {
                            grid_value: r,
                            link: link.name(),
                            mode: mode.name(),
                            engine: "mc",
                            value: est.mean,
                            ci: Some(est.ci_halfwidth_95),
                            extra: mark(r),
                        });
                    }
                }
            }
        }
        let path = PathBuf::from(format!("{out_prefix}_{fig}_{}.csv", link.name()));
        write_long_csv(&path, "rate_bps", &rows)?;
        files.push(path);
    }
    Ok(files)
}

/// Generic one-variable sweep from the experiment spec.
pub fn run_sweep(spec: &ExperimentSpec, out_prefix: &str) -> Result<PathBuf> {
    let (var, values) = spec.sweep.clone().ok_or_else(|| {
        crate::error::AerolayError::Config {
            key: "sweep_variable".into(),
            constraint: "sweep command needs a declared sweep (sweep_variable/sweep_values or --var/--values)".into(),
        }
    })?;
    let mut rows = Vec::new();
    match var {
        SweepVariable::ThresholdDb => {
            let sc = spec.scenario.derive()?;
            for link in [LinkClass::U2u, LinkClass::GueUl] {
                if sc.bandwidth_hz(link).is_err() {
                    continue;
                }
                if spec.engines.analytical() {
                    let eng = Engine::new(&sc)?;
                    for &t in &values {
                        rows.push(Row {
                            grid_value: t,
                            link: link.name(),
                            mode: sc.mode.name(),
                            engine: "analytical",
                            value: eng.coverage(link, t)?,
                            ci: None,
                            extra: Vec::new(),
                        });
                    }
                }
                if spec.engines.montecarlo() {
                    let samples =
                        montecarlo::sinr_samples(&sc, link, spec.mc.n_drops, spec.mc.seed)?;
                    for &t in &values {
                        let p = montecarlo::estimate::coverage_from_samples(
                            &samples,
                            db_to_lin(t),
                        );
                        rows.push(Row {
                            grid_value: t,
                            link: link.name(),
                            mode: sc.mode.name(),
                            engine: "mc",
                            value: p,
                            ci: Some(1.96 * (p * (1.0 - p) / spec.mc.n_drops as f64).sqrt()),
                            extra: Vec::new(),
                        });
                    }
                }
            }
        }
        SweepVariable::RateBps => {
            let sc = spec.scenario.derive()?;
            for link in [LinkClass::U2u, LinkClass::GueUl] {
                if sc.bandwidth_hz(link).is_err() {
                    continue;
                }
                if spec.engines.analytical() {
                    let eng = Engine::new(&sc)?;
                    for &r in &values {
                        rows.push(Row {
                            grid_value: r,
                            link: link.name(),
                            mode: sc.mode.name(),
                            engine: "analytical",
                            value: eng.rate_ccdf(link, r)?,
                            ci: None,
                            extra: Vec::new(),
                        });
                    }
                }
                if spec.engines.montecarlo() {
                    let samples =
                        montecarlo::sinr_samples(&sc, link, spec.mc.n_drops, spec.mc.seed)?;
                    for &r in &values {
                        let est = montecarlo::rate_ccdf_estimate(
                            &sc,
                            link,
                            &samples,
                            r,
                            spec.mc.seed,
                        )?;
                        rows.push(Row {
                            grid_value: r,
                            link: link.name(),
                            mode: sc.mode.name(),
                            engine: "mc",
                            value: est.mean,
                            ci: Some(est.ci_halfwidth_95),
                            extra: Vec::new(),
                        });
                    }
                }
            }
        }
        SweepVariable::EtaU | SweepVariable::LambdaU | SweepVariable::EpsilonU => {
            for &v in &values {
                let mut cfg = spec.scenario.clone();
                var.apply(&mut cfg, v);
                coverage_rows(
                    &cfg,
                    v,
                    spec.fixed_t_db,
                    spec.engines,
                    spec.mc,
                    &[],
                    &mut rows,
                )?;
            }
        }
    }
    let path = PathBuf::from(format!("{out_prefix}_sweep_{}.csv", var.column()));
    write_long_csv(&path, var.column(), &rows)?;
    Ok(path)
}

/// Writes a human-readable summary of the derived scenario (the
/// validate-config verb).
pub fn scenario_summary(cfg: &ScenarioConfig) -> Result<String> {
    use std::fmt::Write;
    let sc = cfg.derive()?;
    let mut s = String::new();
    let _ = writeln!(s, "mode                 {}", sc.mode.name());
    let _ = writeln!(s, "eta_u                {}", sc.eta_u);
    let _ = writeln!(s, "lambda_b [1/m^2]     {:e}", sc.lambda_b);
    let _ = writeln!(s, "lambda_u [1/m^2]     {:e}", sc.lambda_u);
    let _ = writeln!(s, "sigma_u [m]          {:.3}", sc.sigma_u_m);
    let _ = writeln!(s, "sigma_g [m]          {:.3}", sc.sigma_g_m);
    let _ = writeln!(s, "field radius [m]     {:.1}", sc.field_radius_m);
    let _ = writeln!(s, "noise/PRB [dBm]      {:.3}", crate::channel::mw_to_dbm(sc.noise_mw_per_prb));
    let _ = writeln!(
        s,
        "UAV PRBs / cap [dBm] {} / {}",
        sc.n_prbs_uav.map(|n| n.to_string()).unwrap_or_else(|| "-".into()),
        sc.pc_uav()
            .map(|p| format!("{:.2}", crate::channel::mw_to_dbm(p.cap_mw)))
            .unwrap_or_else(|_| "-".into())
    );
    let _ = writeln!(
        s,
        "GUE PRBs / cap [dBm] {} / {}",
        sc.n_prbs_gue.map(|n| n.to_string()).unwrap_or_else(|| "-".into()),
        sc.pc_gue()
            .map(|p| format!("{:.2}", crate::channel::mw_to_dbm(p.cap_mw)))
            .unwrap_or_else(|_| "-".into())
    );
    for link in [LinkClass::U2u, LinkClass::GueUl] {
        let _ = writeln!(
            s,
            "bandwidth {:7} [Hz] {}",
            link.name(),
            sc.bandwidth_hz(link)
                .map(|b| format!("{b:.0}"))
                .unwrap_or_else(|_| "- (no PRBs under this mode)".into())
        );
    }
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiments::parse_config_str;

    fn quick_spec() -> ExperimentSpec {
        let mut spec = parse_config_str("").unwrap();
        spec.mc.n_drops = 300;
        spec.scenario.field_radius_m = 1500.0;
        spec
    }

    #[test]
    fn rate_grid_hits_100_kbps_exactly() {
        assert!(rate_grid().iter().any(|&r| r == 1e5));
    }

    #[test]
    fn sweep_csv_is_bit_reproducible() {
        let dir = tempfile::tempdir().unwrap();
        let mut spec = quick_spec();
        spec.sweep = Some((SweepVariable::EtaU, vec![0.2, 0.6, 1.0]));
        let p1 = run_sweep(&spec, dir.path().join("a").to_str().unwrap()).unwrap();
        let p2 = run_sweep(&spec, dir.path().join("b").to_str().unwrap()).unwrap();
        let a = std::fs::read(&p1).unwrap();
        let b = std::fs::read(&p2).unwrap();
        assert_eq!(a, b);
        let text = String::from_utf8(a).unwrap();
        assert!(text.starts_with("eta_u,link,mode,engine,value,ci"));
    }

    #[test]
    fn threshold_sweep_is_monotone_for_analytical_engine() {
        let dir = tempfile::tempdir().unwrap();
        let mut spec = quick_spec();
        spec.engines = EngineChoice::Analytical;
        spec.sweep = Some((SweepVariable::ThresholdDb, vec![-10.0, 0.0, 10.0, 20.0]));
        let path = run_sweep(&spec, dir.path().join("m").to_str().unwrap()).unwrap();
        let mut rdr = csv::Reader::from_path(&path).unwrap();
        let mut by_link: std::collections::HashMap<String, Vec<f64>> = Default::default();
        for rec in rdr.records() {
            let rec = rec.unwrap();
            by_link
                .entry(rec[1].to_string())
                .or_default()
                .push(rec[4].parse().unwrap());
        }
        for (link, vals) in by_link {
            for w in vals.windows(2) {
                assert!(w[1] <= w[0] + 1e-9, "{link}: {vals:?}");
            }
        }
    }

    #[test]
    fn summary_mentions_window_and_bandwidths() {
        let s = scenario_summary(&ScenarioConfig::default()).unwrap();
        assert!(s.contains("field radius"));
        assert!(s.contains("bandwidth u2u"));
    }
}
