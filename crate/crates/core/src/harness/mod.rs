//! Run configurations, per-cell execution, sweeps and figure data.

mod config;
mod output;
mod reproduce;
mod run;

use thiserror::Error;

pub use config::{load_config, parse_config, CellTask, RunConfig, ScenarioKind, ScenarioSpec, SweepAxis, SweepSpec};
pub use output::{format_sig, write_csv, write_outputs, CSV_TAIL};
pub use reproduce::{preset, reproduce, Figure};
pub use run::{cells, run_cell, run_game, run_sweep, sweep_rows, Cell, CellContext, ResultRow};

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("config error: {0}")]
    Config(String),
    #[error("I/O error: {0}")]
    Io(String),
    #[error(transparent)]
    Core(crate::error::Error),
}

impl From<crate::error::Error> for HarnessError {
    fn from(e: crate::error::Error) -> Self {
        match e {
            crate::error::Error::InvalidParams(m) => HarnessError::Config(m),
            other => HarnessError::Core(other),
        }
    }
}

impl From<std::io::Error> for HarnessError {
    fn from(e: std::io::Error) -> Self {
        HarnessError::Io(e.to_string())
    }
}

impl From<csv::Error> for HarnessError {
    fn from(e: csv::Error) -> Self {
        HarnessError::Io(e.to_string())
    }
}

impl HarnessError {
    /// Process exit code: 2 config, 3 numeric, 4 I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            HarnessError::Config(_) => 2,
            HarnessError::Core(_) => 3,
            HarnessError::Io(_) => 4,
        }
    }
}
