//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum AerolayError {
    /// A config key failed validation; names the key and the violated constraint.
    #[error("config key `{key}`: {constraint}")]
    Config { key: String, constraint: String },

    /// A config file could not be read or parsed.
    #[error("config parse: {0}")]
    Parse(String),

    /// An operation was called outside its domain (negative radius, co-located nodes, ...).
    #[error("domain: {0}")]
    Domain(String),

    /// A semi-infinite interference integral does not converge for the given link.
    #[error("non-convergent interference integral on {link} ({state}): path loss exponent {alpha} <= 2 with unbounded LoS tail")]
    NonConvergent {
        link: &'static str,
        state: &'static str,
        alpha: f64,
    },

    #[error("io: {0}")]
    Io(#[from] std::io::Error),

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, AerolayError>;
