//! Deterministic channel primitives shared by the analytical and Monte
//! Carlo engines: geometry, LoS probability, path loss, antenna gains,
//! fading distributions and transmit power.

pub mod antenna;
pub mod fading;
pub mod los;
pub mod pathloss;
pub mod power;

pub use antenna::AntennaPattern;
pub use fading::{fit_fading_b, nakagami_cdf, nakagami_cdf_approx, sample_fading};
pub use los::{LosModel, LosTable};
pub use pathloss::{dist_3d_m, path_loss_linear};
pub use power::{noise_per_prb_mw, tx_power_mw, PowerControl};

use crate::error::{AerolayError, Result};

/// Node roles appearing in the model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NodeKind {
    UavTx,
    UavRx,
    Gue,
    Bs,
}

/// The four realized transmitter-receiver pairs.
///
/// Any other combination is rejected at config load; see
/// [`LinkKind::from_nodes`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LinkKind {
    /// UAV transmitter to UAV receiver (the direct U2U link).
    UavToUav,
    /// GUE to UAV receiver (interference only).
    GueToUav,
    /// UAV to base station (interference only).
    UavToBs,
    /// GUE to its serving base station (the cellular uplink).
    GueToBs,
}

impl LinkKind {
    pub const ALL: [LinkKind; 4] = [
        LinkKind::UavToUav,
        LinkKind::GueToUav,
        LinkKind::UavToBs,
        LinkKind::GueToBs,
    ];

    /// Builds a link kind from endpoint roles, rejecting pairs that do
    /// not occur in the model.
    pub fn from_nodes(tx: NodeKind, rx: NodeKind) -> Result<LinkKind> {
        use NodeKind::*;
        match (tx, rx) {
            (UavTx, UavRx) => Ok(LinkKind::UavToUav),
            (Gue, UavRx) => Ok(LinkKind::GueToUav),
            (UavTx, Bs) => Ok(LinkKind::UavToBs),
            (Gue, Bs) => Ok(LinkKind::GueToBs),
            _ => Err(AerolayError::Domain(format!(
                "link {tx:?} -> {rx:?} does not occur in the model"
            ))),
        }
    }

    pub fn tx(self) -> NodeKind {
        match self {
            LinkKind::UavToUav | LinkKind::UavToBs => NodeKind::UavTx,
            LinkKind::GueToUav | LinkKind::GueToBs => NodeKind::Gue,
        }
    }

    pub fn rx(self) -> NodeKind {
        match self {
            LinkKind::UavToUav | LinkKind::GueToUav => NodeKind::UavRx,
            LinkKind::UavToBs | LinkKind::GueToBs => NodeKind::Bs,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            LinkKind::UavToUav => "uu",
            LinkKind::GueToUav => "gu",
            LinkKind::UavToBs => "ub",
            LinkKind::GueToBs => "gb",
        }
    }
}

/// Propagation state of a link.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LosState {
    Los,
    Nlos,
}

impl LosState {
    pub const BOTH: [LosState; 2] = [LosState::Los, LosState::Nlos];

    pub fn name(self) -> &'static str {
        match self {
            LosState::Los => "los",
            LosState::Nlos => "nlos",
        }
    }
}

pub fn db_to_lin(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

pub fn lin_to_db(lin: f64) -> f64 {
    10.0 * lin.log10()
}

/// dBm to milliwatts (same scaling as dB to linear).
pub fn dbm_to_mw(dbm: f64) -> f64 {
    db_to_lin(dbm)
}

pub fn mw_to_dbm(mw: f64) -> f64 {
    lin_to_db(mw)
}
