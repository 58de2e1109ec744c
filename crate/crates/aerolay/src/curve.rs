//! Computed coverage curves and their provenance metadata.

use crate::config::SharingMode;

/// Which typical link a curve describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LinkClass {
    /// The direct UAV-to-UAV link.
    U2u,
    /// The ground-user uplink.
    GueUl,
}

impl LinkClass {
    pub fn name(self) -> &'static str {
        match self {
            LinkClass::U2u => "u2u",
            LinkClass::GueUl => "gue_ul",
        }
    }
}

/// How a curve was produced.
#[derive(Debug, Clone, PartialEq)]
pub enum CurveKind {
    Analytical,
    MonteCarlo {
        n_drops: u64,
        seed: u64,
        /// 95% binomial half-widths, one per grid point.
        ci_halfwidths: Vec<f64>,
    },
}

/// A (threshold, probability) curve with provenance.
#[derive(Debug, Clone)]
pub struct CoverageCurve {
    pub thresholds_db: Vec<f64>,
    pub probabilities: Vec<f64>,
    pub kind: CurveKind,
    pub link: LinkClass,
    pub mode: SharingMode,
    /// Hash of the scenario the curve was computed from.
    pub config_hash: u64,
    /// Deployment disk radius both engines integrated over.
    pub field_radius_m: f64,
}

impl CoverageCurve {
    /// Checks the CCDF shape: probabilities in [0, 1], non-increasing in
    /// the threshold.
    pub fn validate(&self) -> Result<(), String> {
        if self.thresholds_db.len() != self.probabilities.len() {
            return Err("threshold/probability length mismatch".into());
        }
        for (i, &p) in self.probabilities.iter().enumerate() {
            if !(0.0..=1.0).contains(&p) {
                return Err(format!("probability {p} out of range at index {i}"));
            }
            if i > 0 {
                if self.thresholds_db[i] <= self.thresholds_db[i - 1] {
                    return Err(format!("thresholds not increasing at index {i}"));
                }
                if p > self.probabilities[i - 1] + 1e-9 {
                    return Err(format!(
                        "coverage increases with threshold at index {i}: {} -> {p}",
                        self.probabilities[i - 1]
                    ));
                }
            }
        }
        Ok(())
    }
}
