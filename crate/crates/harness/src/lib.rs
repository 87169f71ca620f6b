//! Experiment harness for the online selection crates: JSON experiment
//! configs, Monte-Carlo competitive-ratio runs with paired offline
//! benchmarks, verification suites, and report emission (JSON/CSV/JSONL).

pub mod config;
pub mod experiment;
pub mod stats;
pub mod verify;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("core: {0}")]
    Core(#[from] prophet_core::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("config: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, HarnessError>;

pub(crate) fn invalid(msg: impl Into<String>) -> HarnessError {
    HarnessError::Invalid(msg.into())
}
