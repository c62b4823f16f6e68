//! Run manifest: what was requested, from which inputs, and how each
//! scenario ended.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::{write_atomic, CliError};

pub const MANIFEST_SCHEMA_VERSION: u32 = 1;
pub const MANIFEST_FILE: &str = "manifest.json";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScenarioStatus {
    Optimal,
    SuboptimalDropped,
    Infeasible,
    Error,
}

impl ScenarioStatus {
    /// Final states that a restart does not need to recompute.
    pub fn is_final(self) -> bool {
        !matches!(self, ScenarioStatus::Error)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioEntry {
    pub key: String,
    pub country_id: String,
    pub year: u16,
    pub export_fraction: f64,
    /// Digest of everything the scenario result depends on.
    pub digest: String,
    pub status: ScenarioStatus,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub message: Option<String>,
    pub elapsed_ms: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub schema_version: u32,
    pub run_id: String,
    pub config_hash: String,
    /// Input file digests keyed by path as written in the configuration.
    pub input_digests: BTreeMap<String, String>,
    pub scenarios: Vec<ScenarioEntry>,
}

impl RunManifest {
    pub fn read(dir: &Path) -> Result<Option<Self>, CliError> {
        let path = dir.join(MANIFEST_FILE);
        match std::fs::read(&path) {
            Ok(bytes) => serde_json::from_slice(&bytes)
                .map(Some)
                .map_err(|e| CliError::Other(anyhow::anyhow!("{}: {e}", path.display()))),
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(None),
            Err(e) => Err(e.into()),
        }
    }

    pub fn write(&self, dir: &Path) -> Result<(), CliError> {
        let mut sorted = self.clone();
        sorted.scenarios.sort_by(|a, b| a.key.cmp(&b.key));
        let mut bytes = serde_json::to_vec_pretty(&sorted).map_err(anyhow::Error::from)?;
        bytes.push(b'\n');
        write_atomic(&dir.join(MANIFEST_FILE), &bytes)?;
        Ok(())
    }
}
