//! Run configuration: a JSON document with an explicit schema version.
//! Relative paths resolve against the workspace root, which is the
//! `H2EXPORT_WORKSPACE` environment variable when set and the directory of
//! the configuration file otherwise.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use h2export::curves::export_fractions;
use h2export::datamodel::{LiquefactionCap, ModelOptions, ScenarioConfig, TechnoEconomics, Year, MAX_EXPORT_FRACTION};
use h2export::network::HarborSpec;
use h2export::solve::SolverOptions;
use serde::{Deserialize, Serialize};

use crate::CliError;

pub const CONFIG_SCHEMA_VERSION: u32 = 1;
pub const WORKSPACE_ENV: &str = "H2EXPORT_WORKSPACE";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CountryInput {
    pub country_id: String,
    pub placements: PathBuf,
    pub capacity_factors: PathBuf,
    pub regions: PathBuf,
    pub adjacency: PathBuf,
    pub harbor: HarborSpec,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SensitivitySettings {
    pub year: Year,
    pub export_fraction: f64,
}

impl Default for SensitivitySettings {
    fn default() -> Self {
        SensitivitySettings {
            year: Year::Y2050,
            export_fraction: 0.10,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub schema_version: u32,
    pub countries: Vec<CountryInput>,
    pub cache_dir: PathBuf,
    pub results_dir: PathBuf,
    #[serde(default = "all_years")]
    pub years: Vec<Year>,
    /// Defaults to the nine evenly spaced levels up to 95%.
    #[serde(default)]
    pub export_fractions: Option<Vec<f64>>,
    #[serde(default = "full_year")]
    pub horizon_hours: usize,
    /// Optional techno-economic override file, deep-merged over the defaults.
    #[serde(default)]
    pub technoeconomics: Option<PathBuf>,
    #[serde(default)]
    pub overrides: BTreeMap<String, f64>,
    #[serde(default)]
    pub liq_size_cap: Option<LiquefactionCap>,
    #[serde(default)]
    pub options: ModelOptions,
    #[serde(default)]
    pub solver: SolverOptions,
    /// CSV `country_id,regime,water_stress`.
    #[serde(default)]
    pub attributes: Option<PathBuf>,
    #[serde(default)]
    pub sensitivity: SensitivitySettings,
}

fn all_years() -> Vec<Year> {
    Year::ALL.to_vec()
}

fn full_year() -> usize {
    h2export::datamodel::HOURS_PER_YEAR
}

/// A configuration together with the root its paths resolve against.
#[derive(Debug, Clone)]
pub struct LoadedConfig {
    pub config: RunConfig,
    pub root: PathBuf,
    /// Exact bytes of the configuration file.
    pub raw: Vec<u8>,
}

impl LoadedConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let raw = std::fs::read(path).map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        let config: RunConfig = serde_json::from_slice(&raw)
            .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        let root = match std::env::var_os(WORKSPACE_ENV) {
            Some(dir) if !dir.is_empty() => PathBuf::from(dir),
            _ => path.parent().map(Path::to_path_buf).unwrap_or_default(),
        };
        let loaded = LoadedConfig { config, root, raw };
        loaded.validate()?;
        Ok(loaded)
    }

    pub fn resolve(&self, p: &Path) -> PathBuf {
        if p.is_absolute() {
            p.to_path_buf()
        } else {
            self.root.join(p)
        }
    }

    pub fn cache_path(&self, country: &str) -> PathBuf {
        self.resolve(&self.config.cache_dir).join(format!("{country}.clusters.json"))
    }

    pub fn results_dir(&self) -> PathBuf {
        self.resolve(&self.config.results_dir)
    }

    pub fn fractions(&self) -> Vec<f64> {
        self.config
            .export_fractions
            .clone()
            .unwrap_or_else(|| export_fractions().to_vec())
    }

    pub fn technoeconomics(&self) -> Result<TechnoEconomics, CliError> {
        match &self.config.technoeconomics {
            None => Ok(TechnoEconomics::default()),
            Some(p) => TechnoEconomics::load_override_file(&self.resolve(p)).map_err(|e| CliError::Config(e.to_string())),
        }
    }

    pub fn scenario(&self, country: &str, year: Year, fraction: f64) -> ScenarioConfig {
        let mut s = ScenarioConfig::new(country, year, fraction).with_horizon(self.config.horizon_hours);
        s.overrides = self.config.overrides.clone();
        s.liq_size_cap = self.config.liq_size_cap;
        s.options = self.config.options;
        s
    }

    fn validate(&self) -> Result<(), CliError> {
        let c = &self.config;
        let bad = |m: String| Err(CliError::Config(m));
        if c.schema_version != CONFIG_SCHEMA_VERSION {
            return bad(format!(
                "unsupported schema_version {} (expected {CONFIG_SCHEMA_VERSION})",
                c.schema_version
            ));
        }
        if c.countries.is_empty() {
            return bad("no countries configured".into());
        }
        let mut ids: Vec<&str> = c.countries.iter().map(|x| x.country_id.as_str()).collect();
        ids.sort_unstable();
        if ids.windows(2).any(|w| w[0] == w[1]) {
            return bad("duplicate country_id".into());
        }
        if ids.iter().any(|id| id.is_empty() || id.contains(['/', '\\'])) {
            return bad("country_id must be non-empty and free of path separators".into());
        }
        if c.years.is_empty() {
            return bad("no years configured".into());
        }
        let fractions = self.fractions();
        if fractions.is_empty() {
            return bad("no export fractions configured".into());
        }
        for &f in fractions.iter().chain([c.sensitivity.export_fraction].iter()) {
            if !(f > 0.0 && f <= MAX_EXPORT_FRACTION) {
                return bad(format!("export fraction {f} outside (0, {MAX_EXPORT_FRACTION}]"));
            }
        }
        // Exercise scenario validation and override keys before any solve.
        let te = self.technoeconomics()?;
        let probe = self.scenario(ids[0], c.years[0], fractions[0]);
        probe.validate().map_err(|e| CliError::Config(e.to_string()))?;
        probe.technoeconomics(&te).map_err(|e| CliError::Config(e.to_string()))?;
        Ok(())
    }
}
