//! Experiment harness around `ancilla-core`: run configuration, presets,
//! steady-state sweeps, trajectories, CSV/manifest output and the
//! cross-check suite.

pub mod config;
pub mod output;
pub mod states;
pub mod sweep;
pub mod trajectory;
pub mod validate;

use std::fmt;

/// Errors surfaced by the harness.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("configuration error: {0}")]
    Config(String),
    #[error(transparent)]
    Physics(#[from] ancilla_core::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub fn config(msg: impl fmt::Display) -> Self {
        Error::Config(msg.to_string())
    }

    /// Process exit status for this error.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) | Error::Physics(ancilla_core::Error::InvalidParameter { .. }) => 2,
            _ => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
