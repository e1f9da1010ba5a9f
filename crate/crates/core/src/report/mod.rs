//! Report commands, their tables and the command-line front end.

pub mod cli;
mod commands;
mod spec;
mod table;

use thiserror::Error;

pub use commands::{cmd_crossover, cmd_optimize, cmd_simulate, cmd_sweep, cmd_theory, run};
pub use spec::{parse_grid, Command, ExperimentSpec, OutputFormat, DEFAULT_MAX_CELLS};
pub use table::{format_real, round_sig, Cell, ReportTable, SIGNIFICANT_DIGITS};

#[derive(Debug, Error)]
pub enum ReportError {
    #[error("{0}")]
    Usage(String),

    #[error(transparent)]
    Model(#[from] crate::Error),

    #[error("{0}")]
    Resource(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl ReportError {
    /// 2 for usage and configuration errors, 3 for resource refusals.
    pub fn exit_code(&self) -> i32 {
        match self {
            ReportError::Usage(_) | ReportError::Model(_) => 2,
            ReportError::Resource(_) => 3,
            ReportError::Io(_) | ReportError::Csv(_) | ReportError::Json(_) => 1,
        }
    }
}
