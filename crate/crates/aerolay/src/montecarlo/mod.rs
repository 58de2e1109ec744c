//! Independent system-level simulator.
//!
//! Every drop realizes the point processes, propagation states, powers
//! and fading of the full channel stack — no mean-power shortcut, no
//! NLoS pruning, no fading-CDF fit — and yields one per-PRB SINR sample
//! at the typical receiver. Drops are independent and parallelize over a
//! seed+index-derived RNG stream per population, so results do not
//! depend on thread count or scheduling.

pub mod drops;
pub mod estimate;
pub mod ppp;
pub mod rng;

pub use drops::{interferer_contribution, run_drop_gue_ul, run_drop_u2u};
pub use estimate::{
    empirical_laplace, estimate_coverage, mc_coverage_curve, rate_ccdf_estimate, sinr_samples,
    SimEstimate,
};
pub use ppp::{sample_ppp, RadialDensity};
pub use rng::{drop_rng, Stream};
