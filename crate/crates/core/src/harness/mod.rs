//! Scenario configs, runs and reports.
//!
//! A [`ScenarioConfig`] names one of the six demonstrations and its
//! parameters. [`run_scenario`] executes it from a single root seed and
//! returns a [`Report`]: one JSON record per step plus a trailer carrying
//! checks, verdicts, ledgers and versions.

mod config;
mod report;
mod scenarios;

use std::fs;
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::boxkit::BoxError;
use crate::inference::InferenceError;
use crate::observer::ObserverError;
use crate::quantum::QuantumError;

pub use config::{
    ConcatParams, LedgerParams, QuantumParams, Scenario, ScenarioConfig, TrapParams,
    TwoObserverParams, UnderdeterminationParams, SCENARIOS, SCHEMA_VERSION,
};
pub use report::{emit_report, render_report, Check, Format, Report, Trailer, Versions};
pub use scenarios::run_scenario;

/// Environment variable naming the default report directory.
pub const OUTPUT_DIR_ENV: &str = "BLACKBOX_OUTPUT_DIR";

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("config error: {0}")]
    Schema(String),
    #[error("{message}")]
    Precondition { code: &'static str, message: String },
    #[error("cannot read or write {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Box(#[from] BoxError),
    #[error(transparent)]
    Observer(#[from] ObserverError),
    #[error(transparent)]
    Inference(#[from] InferenceError),
    #[error(transparent)]
    Quantum(#[from] QuantumError),
}

impl HarnessError {
    /// Stable identifier for the error class.
    pub fn code(&self) -> &'static str {
        match self {
            HarnessError::Schema(_) => "CONFIG_SCHEMA",
            HarnessError::Precondition { code, .. } => code,
            HarnessError::Io { .. } => "IO",
            HarnessError::Box(_) => "CONFIG_BOX",
            HarnessError::Observer(_) => "CONFIG_OBSERVER",
            HarnessError::Inference(InferenceError::NoViolation { .. }) => "NO_VIOLATION",
            HarnessError::Inference(_) => "INFERENCE",
            HarnessError::Quantum(_) => "CONFIG_QUANTUM",
        }
    }

    /// Process exit code: 1 when a run could not establish its invariant, 2 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            HarnessError::Inference(InferenceError::NoViolation { .. }) => 1,
            _ => 2,
        }
    }
}

pub fn load_config(path: &Path) -> Result<ScenarioConfig, HarnessError> {
    let text = fs::read_to_string(path).map_err(|source| HarnessError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    ScenarioConfig::from_json(&text)
}

/// Scenario identifiers with one-line descriptions.
pub fn list_scenarios() -> &'static [(&'static str, &'static str)] {
    &SCENARIOS
}
