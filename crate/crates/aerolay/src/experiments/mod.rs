//! Experiment harness: scenario files, parameter sweeps, and the CSV
//! outputs behind the command-line front end.
//!
//! Config files are flat `key = value` text ('#' comments); scenario keys
//! are the [`crate::config::ScenarioConfig`] field names, plus the
//! experiment keys `engines`, `mc_drops`, `mc_seed`, `fixed_t_db`,
//! `sweep_variable`, `sweep_values`. Unknown keys are rejected.

pub mod figures;
pub mod output;

pub use figures::{run_fig2, run_fig3, run_fig45, run_sweep, Fig2Report};

use std::path::Path;

use crate::config::ScenarioConfig;
use crate::error::{AerolayError, Result};

/// Which evaluation engines a run uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EngineChoice {
    Analytical,
    MonteCarlo,
    Both,
}

impl EngineChoice {
    pub fn analytical(self) -> bool {
        matches!(self, EngineChoice::Analytical | EngineChoice::Both)
    }

    pub fn montecarlo(self) -> bool {
        matches!(self, EngineChoice::MonteCarlo | EngineChoice::Both)
    }
}

/// Monte Carlo campaign parameters.
#[derive(Debug, Clone, Copy)]
pub struct McParams {
    pub n_drops: u64,
    pub seed: u64,
}

impl Default for McParams {
    fn default() -> Self {
        // CI half-width below ~0.002 at mid coverage
        McParams {
            n_drops: 200_000,
            seed: 1,
        }
    }
}

/// Sweepable quantities.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepVariable {
    /// SINR threshold, dB.
    ThresholdDb,
    EtaU,
    LambdaU,
    EpsilonU,
    /// Rate threshold, bits/s.
    RateBps,
}

impl SweepVariable {
    pub fn parse(name: &str) -> Result<SweepVariable> {
        Ok(match name {
            "T" => SweepVariable::ThresholdDb,
            "eta_u" => SweepVariable::EtaU,
            "lambda_u" => SweepVariable::LambdaU,
            "epsilon_u" => SweepVariable::EpsilonU,
            "rate_T" => SweepVariable::RateBps,
            other => {
                return Err(AerolayError::Config {
                    key: "sweep_variable".into(),
                    constraint: format!(
                        "must be one of T|eta_u|lambda_u|epsilon_u|rate_T, got `{other}`"
                    ),
                })
            }
        })
    }

    /// CSV column header for the grid value.
    pub fn column(self) -> &'static str {
        match self {
            SweepVariable::ThresholdDb => "t_db",
            SweepVariable::EtaU => "eta_u",
            SweepVariable::LambdaU => "lambda_u",
            SweepVariable::EpsilonU => "epsilon_u",
            SweepVariable::RateBps => "rate_bps",
        }
    }

    /// Applies a grid value to a scenario (threshold-like variables leave
    /// the scenario untouched; they are evaluation abscissae).
    pub fn apply(self, cfg: &mut ScenarioConfig, value: f64) {
        match self {
            SweepVariable::ThresholdDb | SweepVariable::RateBps => {}
            SweepVariable::EtaU => cfg.eta_u = value,
            SweepVariable::LambdaU => cfg.lambda_u = value,
            SweepVariable::EpsilonU => cfg.epsilon_u = value,
        }
    }
}

/// A fully described experiment.
#[derive(Debug, Clone)]
pub struct ExperimentSpec {
    pub scenario: ScenarioConfig,
    pub sweep: Option<(SweepVariable, Vec<f64>)>,
    pub engines: EngineChoice,
    pub mc: McParams,
    /// Coverage threshold used when sweeping a scenario parameter.
    pub fixed_t_db: f64,
}

impl Default for ExperimentSpec {
    fn default() -> Self {
        ExperimentSpec {
            scenario: ScenarioConfig::default(),
            sweep: None,
            engines: EngineChoice::Both,
            mc: McParams::default(),
            fixed_t_db: -5.0,
        }
    }
}

impl ExperimentSpec {
    fn apply_key(&mut self, key: &str, value: &str) -> Result<()> {
        if self.scenario.apply_key(key, value)? {
            return Ok(());
        }
        let cfg_err = |c: String| AerolayError::Config {
            key: key.to_string(),
            constraint: c,
        };
        match key {
            "engines" => {
                self.engines = match value {
                    "analytical" => EngineChoice::Analytical,
                    "mc" => EngineChoice::MonteCarlo,
                    "both" => EngineChoice::Both,
                    other => {
                        return Err(cfg_err(format!(
                            "must be analytical|mc|both, got `{other}`"
                        )))
                    }
                }
            }
            "mc_drops" => {
                self.mc.n_drops = value
                    .parse()
                    .map_err(|_| cfg_err(format!("not a positive integer: `{value}`")))?;
                if self.mc.n_drops == 0 {
                    return Err(cfg_err("must be >= 1".into()));
                }
            }
            "mc_seed" => {
                self.mc.seed = value
                    .parse()
                    .map_err(|_| cfg_err(format!("not an integer: `{value}`")))?
            }
            "fixed_t_db" => {
                self.fixed_t_db = value
                    .parse()
                    .map_err(|_| cfg_err(format!("not a number: `{value}`")))?
            }
            "sweep_variable" => {
                let var = SweepVariable::parse(value)?;
                self.sweep = Some(match self.sweep.take() {
                    Some((_, vals)) => (var, vals),
                    None => (var, Vec::new()),
                });
            }
            "sweep_values" => {
                let vals = parse_values(value).map_err(cfg_err)?;
                self.sweep = Some(match self.sweep.take() {
                    Some((var, _)) => (var, vals),
                    None => (SweepVariable::ThresholdDb, vals),
                });
            }
            other => return Err(cfg_err(format!("unknown key `{other}`"))),
        }
        Ok(())
    }

    /// Validates cross-field constraints and the derived scenario.
    pub fn validate(&self) -> Result<()> {
        self.scenario.derive()?;
        if let Some((_, values)) = &self.sweep {
            if values.is_empty() {
                return Err(AerolayError::Config {
                    key: "sweep_values".into(),
                    constraint: "sweep declared without values".into(),
                });
            }
            if values.iter().any(|v| !v.is_finite()) {
                return Err(AerolayError::Config {
                    key: "sweep_values".into(),
                    constraint: "sweep values must be finite".into(),
                });
            }
        }
        Ok(())
    }
}

/// Parses `a,b,c` lists and `start:stop:step` ranges.
pub fn parse_values(text: &str) -> std::result::Result<Vec<f64>, String> {
    let text = text.trim();
    if text.contains(':') {
        let parts: Vec<&str> = text.split(':').collect();
        if parts.len() != 3 {
            return Err(format!("range must be start:stop:step, got `{text}`"));
        }
        let nums: Vec<f64> = parts
            .iter()
            .map(|p| p.trim().parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| format!("non-numeric range bound in `{text}`"))?;
        let (start, stop, step) = (nums[0], nums[1], nums[2]);
        if step <= 0.0 || stop < start {
            return Err(format!("range `{text}` must ascend with positive step"));
        }
        let n = ((stop - start) / step).round() as usize + 1;
        return Ok((0..n)
            .map(|i| start + i as f64 * step)
            .filter(|&v| v <= stop + step * 1e-9)
            .collect());
    }
    text.split(',')
        .map(|p| {
            p.trim()
                .parse::<f64>()
                .map_err(|_| format!("non-numeric sweep value `{p}`"))
        })
        .collect()
}

/// Parses a config file; an empty file yields the default experiment on
/// the default scenario.
pub fn load_config(path: &Path) -> Result<ExperimentSpec> {
    let text = std::fs::read_to_string(path)?;
    parse_config_str(&text)
}

pub fn parse_config_str(text: &str) -> Result<ExperimentSpec> {
    let mut spec = ExperimentSpec::default();
    let mut seen = std::collections::HashSet::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            AerolayError::Parse(format!("line {}: expected `key = value`", lineno + 1))
        })?;
        let key = key.trim();
        let value = value.trim();
        if !seen.insert(key.to_string()) {
            return Err(AerolayError::Config {
                key: key.to_string(),
                constraint: "duplicate key".into(),
            });
        }
        spec.apply_key(key, value)?;
    }
    spec.validate()?;
    Ok(spec)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::SharingMode;
    use crate::curve::LinkClass;

    #[test]
    fn empty_file_is_default_scenario() {
        let spec = parse_config_str("").unwrap();
        assert_eq!(spec.scenario, ScenarioConfig::default());
        assert_eq!(spec.mc.n_drops, 200_000);
        let sc = spec.scenario.derive().unwrap();
        assert_eq!(sc.n_prbs, 50);
        assert!((sc.lambda_b - 5e-6).abs() < 1e-18);
    }

    #[test]
    fn invalid_eta_is_named() {
        let err = parse_config_str("eta_u = 1.5").unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("eta_u"), "{msg}");
        assert!(msg.contains("[0, 1]"), "{msg}");
    }

    #[test]
    fn overlay_bandwidth_derivation() {
        let spec = parse_config_str("sharing_mode = overlay\neta_u = 0.1").unwrap();
        let sc = spec.scenario.derive().unwrap();
        assert!((sc.bandwidth_hz(LinkClass::GueUl).unwrap() - 9e6).abs() < 1e-6);
        assert!((sc.bandwidth_hz(LinkClass::U2u).unwrap() - 1e6).abs() < 1e-6);
        assert_eq!(sc.mode, SharingMode::Overlay);
    }

    #[test]
    fn unknown_and_duplicate_keys_rejected() {
        assert!(parse_config_str("frobnicate = 3").is_err());
        assert!(parse_config_str("eta_u = 0.2\neta_u = 0.3").is_err());
        assert!(parse_config_str("eta_u 0.2").is_err());
    }

    #[test]
    fn sweep_declaration_round_trip() {
        let spec =
            parse_config_str("sweep_variable = eta_u\nsweep_values = 0.2,0.4,0.6").unwrap();
        let (var, vals) = spec.sweep.unwrap();
        assert_eq!(var, SweepVariable::EtaU);
        assert_eq!(vals, vec![0.2, 0.4, 0.6]);
        assert!(parse_config_str("sweep_variable = eta_u").is_err());
    }

    #[test]
    fn value_ranges() {
        assert_eq!(
            parse_values("-10:30:10").unwrap(),
            vec![-10.0, 0.0, 10.0, 20.0, 30.0]
        );
        assert_eq!(parse_values("1, 2,3").unwrap(), vec![1.0, 2.0, 3.0]);
        assert!(parse_values("5:1:1").is_err());
    }

    #[test]
    fn comments_and_blank_lines_ignored() {
        let spec = parse_config_str("# full comment\n\nlambda_u = 5e-6  # trailing\n").unwrap();
        assert!((spec.scenario.lambda_u - 5e-6).abs() < 1e-18);
    }
}
