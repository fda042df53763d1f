//! Command-line front end for qpurify: single-point extraction reports,
//! parameter sweeps written as CSV, trajectories and the validation suite.

pub mod config;
pub mod output;
pub mod sweep;
pub mod validate;

use thiserror::Error;

use config::{ConfigError, Point};

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Config(#[from] ConfigError),

    #[error("cannot write {path}: {source}")]
    Output {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("grid point {index} (epsilon_tau = {}, theta_over_pi = {}, chi = {}, kT_over_omega = {}): {source}",
        point.epsilon_tau, point.theta_over_pi, point.chi, point.kt_over_omega)]
    GridPoint {
        index: usize,
        point: Point,
        #[source]
        source: qpurify_core::Error,
    },

    #[error(transparent)]
    Compute(#[from] qpurify_core::Error),

    #[error("cannot start worker pool: {0}")]
    Pool(String),

    #[error("{failed} validation criteria failed")]
    Validation { failed: usize },
}

impl CliError {
    /// Process exit status: 1 for validation failures, 2 for configuration
    /// and output problems, 1 for anything raised during computation.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Output { .. } => 2,
            _ => 1,
        }
    }
}
