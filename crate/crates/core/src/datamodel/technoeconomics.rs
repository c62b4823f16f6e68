use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::finance::annual_cost;
use super::year::{ByYear, Year};
use crate::error::{Error, Result};

const DEFAULTS_JSON: &str = include_str!("../../data/technoeconomics.json");

/// Cost-bearing components of the export chain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Technology {
    Pv,
    Wind,
    Battery,
    Lh2Tank,
    Pem,
    Liquefaction,
    ElecGrid,
    Pipeline,
    LocalGrid,
}

impl Technology {
    pub const ALL: [Technology; 9] = [
        Technology::Pv,
        Technology::Wind,
        Technology::Battery,
        Technology::Lh2Tank,
        Technology::Pem,
        Technology::Liquefaction,
        Technology::ElecGrid,
        Technology::Pipeline,
        Technology::LocalGrid,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Technology::Pv => "pv",
            Technology::Wind => "wind",
            Technology::Battery => "battery",
            Technology::Lh2Tank => "lh2_tank",
            Technology::Pem => "pem",
            Technology::Liquefaction => "liquefaction",
            Technology::ElecGrid => "elec_grid",
            Technology::Pipeline => "pipeline",
            Technology::LocalGrid => "local_grid",
        }
    }
}

impl fmt::Display for Technology {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One number per technology.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PerTechnology {
    pub pv: f64,
    pub wind: f64,
    pub battery: f64,
    pub lh2_tank: f64,
    pub pem: f64,
    pub liquefaction: f64,
    pub elec_grid: f64,
    pub pipeline: f64,
    pub local_grid: f64,
}

impl PerTechnology {
    pub fn get(&self, tech: Technology) -> f64 {
        match tech {
            Technology::Pv => self.pv,
            Technology::Wind => self.wind,
            Technology::Battery => self.battery,
            Technology::Lh2Tank => self.lh2_tank,
            Technology::Pem => self.pem,
            Technology::Liquefaction => self.liquefaction,
            Technology::ElecGrid => self.elec_grid,
            Technology::Pipeline => self.pipeline,
            Technology::LocalGrid => self.local_grid,
        }
    }
}

/// Cost, efficiency and lifetime assumptions for the export chain.
///
/// Units: PV, wind and PEM capex in EUR/kW_el (PEM on the electrical input
/// side); battery in EUR/kWh; LH2 tank in EUR/kWh_LHV; liquefaction
/// coefficient in MEUR/GW^exponent (equivalently EUR/kW at 1 GW); electric
/// grid and pipeline in MEUR/km/GW; local grid in MEUR/km. All EUR are real
/// 2022 EUR.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TechnoEconomics {
    pub capex_pv: ByYear,
    pub capex_wind: ByYear,
    pub capex_battery: ByYear,
    pub capex_lh2_tank: f64,
    pub capex_pem: ByYear,
    pub pem_efficiency: ByYear,
    /// Round-trip efficiency.
    pub battery_efficiency: f64,
    pub liq_capex_coeff: f64,
    pub liq_capex_exponent: f64,
    pub liq_max_size_tpd: f64,
    /// kWh_el per kWh_LHV liquefied.
    pub liq_el_demand: f64,
    pub capex_elec_grid: f64,
    pub capex_pipeline: f64,
    pub capex_local_grid: f64,
    pub opex_frac: PerTechnology,
    pub lifetime_years: PerTechnology,
    pub grid_loss_per_1000km: f64,
    pub interest_rate: f64,
    /// kWh per kg.
    pub lhv_h2: f64,
    pub detour_factor: f64,
}

impl Default for TechnoEconomics {
    fn default() -> Self {
        TechnoEconomics::from_json_str(DEFAULTS_JSON).expect("embedded defaults are valid")
    }
}

impl TechnoEconomics {
    /// The embedded default parameter document.
    pub fn defaults_json() -> &'static str {
        DEFAULTS_JSON
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let te: TechnoEconomics = serde_json::from_str(s)?;
        te.validate()?;
        Ok(te)
    }

    /// Defaults deep-merged with a partial override document.
    pub fn with_override_json(patch: &str) -> Result<Self> {
        let mut base: Value = serde_json::from_str(DEFAULTS_JSON)?;
        let patch: Value = serde_json::from_str(patch)?;
        deep_merge(&mut base, patch);
        let te: TechnoEconomics = serde_json::from_value(base)?;
        te.validate()?;
        Ok(te)
    }

    pub fn load_override_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::with_override_json(&text)
    }

    /// Applies multiplicative factors keyed by field name. Nested fields use
    /// dotted paths (`opex_frac.pv`); a key naming a per-year or
    /// per-technology table scales every entry.
    pub fn scaled(&self, factors: &BTreeMap<String, f64>) -> Result<Self> {
        if factors.is_empty() {
            return Ok(self.clone());
        }
        let mut doc = serde_json::to_value(self)?;
        for (key, &factor) in factors {
            if !(factor > 0.0) || !factor.is_finite() {
                return Err(Error::param(format!(
                    "override factor for `{key}` must be positive, got {factor}"
                )));
            }
            let mut node = &mut doc;
            for part in key.split('.') {
                node = node
                    .get_mut(part)
                    .ok_or_else(|| Error::param(format!("unknown parameter `{key}`")))?;
            }
            scale_numbers(node, factor);
        }
        let te: TechnoEconomics = serde_json::from_value(doc)?;
        te.validate()?;
        Ok(te)
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("capex_lh2_tank", self.capex_lh2_tank),
            ("liq_capex_coeff", self.liq_capex_coeff),
            ("liq_capex_exponent", self.liq_capex_exponent),
            ("liq_max_size_tpd", self.liq_max_size_tpd),
            ("liq_el_demand", self.liq_el_demand),
            ("capex_elec_grid", self.capex_elec_grid),
            ("capex_pipeline", self.capex_pipeline),
            ("capex_local_grid", self.capex_local_grid),
            ("lhv_h2", self.lhv_h2),
            ("detour_factor", self.detour_factor),
        ];
        for (name, v) in positive {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::param(format!("{name} must be positive")));
            }
        }
        if !(self.grid_loss_per_1000km >= 0.0 && self.grid_loss_per_1000km < 1.0) {
            return Err(Error::param("grid_loss_per_1000km must be in [0, 1)"));
        }
        for tech in Technology::ALL {
            if !(self.opex_frac.get(tech) > 0.0) {
                return Err(Error::param(format!("opex_frac.{tech} must be positive")));
            }
            if !(self.lifetime_years.get(tech) >= 1.0) {
                return Err(Error::param(format!("lifetime_years.{tech} must be >= 1")));
            }
        }
        if !(self.interest_rate > 0.0 && self.interest_rate < 1.0) {
            return Err(Error::param("interest_rate must be in (0, 1)"));
        }
        if !(self.battery_efficiency > 0.0 && self.battery_efficiency <= 1.0) {
            return Err(Error::param("battery_efficiency must be in (0, 1]"));
        }
        for (name, table) in [
            ("capex_pv", &self.capex_pv),
            ("capex_wind", &self.capex_wind),
            ("capex_battery", &self.capex_battery),
            ("capex_pem", &self.capex_pem),
        ] {
            let v = table.as_array();
            if v.iter().any(|&x| !(x > 0.0) || !x.is_finite()) {
                return Err(Error::param(format!("{name} must be positive")));
            }
            if v.windows(2).any(|w| w[1] > w[0]) {
                return Err(Error::param(format!("{name} must be nonincreasing over years")));
            }
        }
        let eff = self.pem_efficiency.as_array();
        if eff.iter().any(|&x| !(x > 0.0 && x <= 1.0)) {
            return Err(Error::param("pem_efficiency must be in (0, 1]"));
        }
        if eff.windows(2).any(|w| w[1] < w[0]) {
            return Err(Error::param("pem_efficiency must be nondecreasing over years"));
        }
        Ok(())
    }

    /// Capex per unit of the technology's capacity variable: EUR/kW for
    /// generators and PEM, EUR/kWh for storage, EUR/(kW km) for the
    /// inter-regional grids, EUR/km for the local grid. Liquefaction is
    /// size-dependent and handled separately.
    pub fn unit_capex(&self, tech: Technology, year: Year) -> f64 {
        match tech {
            Technology::Pv => self.capex_pv.get(year),
            Technology::Wind => self.capex_wind.get(year),
            Technology::Battery => self.capex_battery.get(year),
            Technology::Lh2Tank => self.capex_lh2_tank,
            Technology::Pem => self.capex_pem.get(year),
            Technology::Liquefaction => self.liq_capex_coeff,
            // MEUR / (km GW) == EUR / (km kW)
            Technology::ElecGrid => self.capex_elec_grid,
            Technology::Pipeline => self.capex_pipeline,
            Technology::LocalGrid => self.capex_local_grid * 1e6,
        }
    }

    /// Annualised cost (annuity + OPEX) of `capex` EUR invested in `tech`.
    pub fn annualize(&self, tech: Technology, capex: f64) -> Result<f64> {
        annual_cost(
            capex,
            self.opex_frac.get(tech),
            self.interest_rate,
            self.lifetime_years.get(tech),
        )
    }

    /// Annual cost per unit capacity of `tech` in `year`.
    pub fn annual_unit_cost(&self, tech: Technology, year: Year) -> Result<f64> {
        self.annualize(tech, self.unit_capex(tech, year))
    }

    pub fn pem_eff(&self, year: Year) -> f64 {
        self.pem_efficiency.get(year)
    }

    /// Converts a liquefaction throughput in t/d into GW_LHV.
    pub fn tpd_to_gw(&self, tpd: f64) -> f64 {
        tpd * 1000.0 * self.lhv_h2 / 24.0 / 1e6
    }
}

fn deep_merge(base: &mut Value, patch: Value) {
    match (base, patch) {
        (Value::Object(b), Value::Object(p)) => {
            for (k, v) in p {
                match b.get_mut(&k) {
                    Some(slot) => deep_merge(slot, v),
                    None => {
                        b.insert(k, v);
                    }
                }
            }
        }
        (slot, v) => *slot = v,
    }
}

fn scale_numbers(node: &mut Value, factor: f64) {
    match node {
        Value::Number(n) => {
            if let Some(x) = n.as_f64() {
                if let Some(scaled) = serde_json::Number::from_f64(x * factor) {
                    *n = scaled;
                }
            }
        }
        Value::Object(map) => map.values_mut().for_each(|v| scale_numbers(v, factor)),
        Value::Array(items) => items.iter_mut().for_each(|v| scale_numbers(v, factor)),
        _ => {}
    }
}
