//! Command-line orchestration for h2export: clustering, scenario sweeps,
//! sensitivity runs and report bundles.
//!
//! Exit codes: 0 success, 1 runtime failure, 2 configuration error,
//! 3 every scenario of a run failed.

pub mod cluster;
pub mod config;
pub mod manifest;
pub mod pool;
pub mod report;
pub mod run;
pub mod sensitivity;

mod outputs;

use std::path::Path;

use sha2::{Digest, Sha256};
use thiserror::Error;

pub use outputs::ScenarioRecord;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("all scenarios failed: {0}")]
    AllFailed(String),
    #[error(transparent)]
    Other(#[from] anyhow::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Other(_) => 1,
            CliError::Config(_) => 2,
            CliError::AllFailed(_) => 3,
        }
    }
}

impl From<h2export::Error> for CliError {
    fn from(e: h2export::Error) -> Self {
        CliError::Other(e.into())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Other(e.into())
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

pub fn file_digest(path: &Path) -> Result<String, CliError> {
    let bytes = std::fs::read(path).map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
    Ok(sha256_hex(&bytes))
}

/// Writes through a temporary sibling and renames, so readers never see a
/// partial file.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> std::io::Result<()> {
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir)?;
    }
    let tmp = path.with_extension("tmp");
    std::fs::write(&tmp, bytes)?;
    std::fs::rename(&tmp, path)
}
