use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::technoeconomics::TechnoEconomics;
use super::year::Year;
use crate::error::{Error, Result};

pub const HOURS_PER_YEAR: usize = 8760;

/// Largest export fraction for which scenarios are built.
pub const MAX_EXPORT_FRACTION: f64 = 0.95;

/// Maximum liquefaction train size used for the economy-of-scale law.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LiquefactionCap {
    /// Train size limit in tons per day.
    Tpd(f64),
    Unbounded,
}

/// Which optional parts of the chain are available to the optimizer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct ModelOptions {
    pub batteries: bool,
    pub pipelines: bool,
    pub electric_grid: bool,
}

impl Default for ModelOptions {
    fn default() -> Self {
        ModelOptions {
            batteries: true,
            pipelines: true,
            electric_grid: true,
        }
    }
}

/// A single scenario: one country, one year, one export level.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioConfig {
    pub country_id: String,
    pub year: Year,
    /// Fraction of the maximum exportable hydrogen, in (0, 0.95].
    pub export_fraction: f64,
    #[serde(default = "default_horizon")]
    pub horizon_hours: usize,
    /// Multiplicative factors on technoeconomic fields, see
    /// [`TechnoEconomics::scaled`].
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub overrides: BTreeMap<String, f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub liq_size_cap: Option<LiquefactionCap>,
    #[serde(default)]
    pub options: ModelOptions,
}

fn default_horizon() -> usize {
    HOURS_PER_YEAR
}

impl ScenarioConfig {
    pub fn new(country_id: impl Into<String>, year: Year, export_fraction: f64) -> Self {
        ScenarioConfig {
            country_id: country_id.into(),
            year,
            export_fraction,
            horizon_hours: HOURS_PER_YEAR,
            overrides: BTreeMap::new(),
            liq_size_cap: None,
            options: ModelOptions::default(),
        }
    }

    pub fn with_horizon(mut self, hours: usize) -> Self {
        self.horizon_hours = hours;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.export_fraction > 0.0 && self.export_fraction <= MAX_EXPORT_FRACTION) {
            return Err(Error::param(format!(
                "export_fraction must be in (0, {MAX_EXPORT_FRACTION}], got {}",
                self.export_fraction
            )));
        }
        if self.horizon_hours == 0 {
            return Err(Error::param("horizon_hours must be positive"));
        }
        if let Some(LiquefactionCap::Tpd(tpd)) = self.liq_size_cap {
            if !(tpd > 0.0) {
                return Err(Error::param("liquefaction size cap must be positive"));
            }
        }
        for (k, &v) in &self.overrides {
            if !(v > 0.0) {
                return Err(Error::param(format!("override factor for `{k}` must be positive")));
            }
        }
        Ok(())
    }

    /// Checks the horizon against a time-series length: the horizon must
    /// equal it or divide it.
    pub fn check_series_len(&self, len: usize) -> Result<()> {
        if self.horizon_hours == 0 || len == 0 || len % self.horizon_hours != 0 {
            return Err(Error::param(format!(
                "horizon of {} h does not divide time series of {len} h",
                self.horizon_hours
            )));
        }
        Ok(())
    }

    /// Share of a year covered by the horizon.
    pub fn year_share(&self) -> f64 {
        self.horizon_hours as f64 / HOURS_PER_YEAR as f64
    }

    /// Techno-economics with this scenario's override factors applied.
    pub fn technoeconomics(&self, base: &TechnoEconomics) -> Result<TechnoEconomics> {
        base.scaled(&self.overrides)
    }

    /// Liquefaction size cap in GW_LHV, `None` when scaling is unbounded.
    pub fn liq_cap_gw(&self, te: &TechnoEconomics) -> Option<f64> {
        match self.liq_size_cap {
            None => Some(te.tpd_to_gw(te.liq_max_size_tpd)),
            Some(LiquefactionCap::Tpd(tpd)) => Some(te.tpd_to_gw(tpd)),
            Some(LiquefactionCap::Unbounded) => None,
        }
    }
}
