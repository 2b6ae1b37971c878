//! Scenario runner for transient tunneling through resonance doublets.
//!
//! The binary `qshutter` is a thin layer over this crate: configuration
//! parsing, figure presets, manifests and the self test all live here so
//! integration tests can drive them directly.

pub mod checks;
pub mod config;
pub mod output;
pub mod presets;
pub mod reference;
pub mod scenario;
pub mod selftest;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config: {0}")]
    Config(#[from] config::ConfigError),
    #[error(transparent)]
    Core(#[from] qshutter_core::Error),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{0}")]
    Usage(String),
}

pub type Result<T, E = CliError> = std::result::Result<T, E>;
