//! Coverage analysis for cellular networks in which UAV-to-UAV (U2U)
//! transmit-receive pairs share uplink spectrum with ground users (GUEs).
//!
//! The crate has four layers:
//!
//! - [`channel`]: deterministic link primitives — ITU line-of-sight
//!   probability on its step grid, path loss, the BS vertical array
//!   pattern, Nakagami-m fading, and fractional power control.
//! - [`analytical`]: semi-analytical SINR coverage probabilities for the
//!   U2U link and the GUE uplink, built from Poisson-field interference
//!   Laplace functionals, plus the mean UAV transmit power and the rate
//!   CCDF mapping.
//! - [`montecarlo`]: an independent drop-based simulator that applies the
//!   full channel stack with no analytical shortcuts; used to
//!   cross-validate the analytical engine.
//! - [`experiments`]: config loading, parameter sweeps and the CSV
//!   outputs behind the `aerolay` command-line front end.
//!
//! Both engines evaluate the same finite deployment disk
//! ([`Scenario::field_radius_m`]) so that their interference fields are
//! directly comparable; see the README for the config schema.

pub mod analytical;
pub mod channel;
pub mod config;
pub mod curve;
pub mod error;
pub mod experiments;
pub mod montecarlo;
pub mod quad;

pub use config::{Scenario, ScenarioConfig, SharingMode};
pub use curve::{CoverageCurve, CurveKind, LinkClass};
pub use error::AerolayError;
