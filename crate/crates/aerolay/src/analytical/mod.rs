//! Semi-analytical evaluation of coverage probabilities: mean UAV
//! transmit power, interference Laplace functionals, U2U and GUE-uplink
//! coverage, and the rate CCDF mapping.

pub mod coverage;
pub mod laplace;
pub mod mean_power;

pub use coverage::{Engine, InterfererPopulation};
pub use laplace::{
    gue_power_atoms, tabulate_neg_log, KernelSpec, LaplaceKernel, PowerAtom, RadialShape,
    StateWeight, TabulatedLaplace, TxPowerLaw,
};
pub use mean_power::{mean_power_with_table, mean_uav_tx_power_los_mw, mean_uav_tx_power_mw};
