//! Hydrogen cost per kilogram and its decomposition.

use num_traits::Float;
use serde::{Deserialize, Serialize};

use crate::curves::CostPotentialCurve;
use crate::datamodel::{Technology, HOURS_PER_YEAR};
use crate::error::{Error, Result};
use crate::esm::SystemModel;
use crate::solve::{annual_costs_by_technology, Solution};

/// Annual cost or cost per kg split over the supply chain.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct CostBreakdown<T> {
    pub res: T,
    pub pem: T,
    pub battery: T,
    pub lh2_tank: T,
    pub elec_grid: T,
    pub pipelines: T,
    pub liquefaction: T,
    pub local_grid: T,
}

impl<T: Float> CostBreakdown<T> {
    pub const COLUMNS: [&'static str; 8] = [
        "res",
        "pem",
        "battery",
        "lh2_tank",
        "elec_grid",
        "pipelines",
        "liquefaction",
        "local_grid",
    ];

    pub fn zero() -> Self {
        Self::from_array([T::zero(); 8])
    }

    pub fn as_array(&self) -> [T; 8] {
        [
            self.res,
            self.pem,
            self.battery,
            self.lh2_tank,
            self.elec_grid,
            self.pipelines,
            self.liquefaction,
            self.local_grid,
        ]
    }

    pub fn from_array(v: [T; 8]) -> Self {
        CostBreakdown {
            res: v[0],
            pem: v[1],
            battery: v[2],
            lh2_tank: v[3],
            elec_grid: v[4],
            pipelines: v[5],
            liquefaction: v[6],
            local_grid: v[7],
        }
    }

    pub fn sum(&self) -> T {
        self.as_array().iter().fold(T::zero(), |a, &b| a + b)
    }

    pub fn map(&self, f: impl Fn(T) -> T) -> Self {
        Self::from_array(self.as_array().map(f))
    }

    /// Adds `value` to the category that carries `tech`.
    pub fn add(&mut self, tech: Technology, value: T) {
        let slot = match tech {
            Technology::Pv | Technology::Wind => &mut self.res,
            Technology::Pem => &mut self.pem,
            Technology::Battery => &mut self.battery,
            Technology::Lh2Tank => &mut self.lh2_tank,
            Technology::ElecGrid => &mut self.elec_grid,
            Technology::Pipeline => &mut self.pipelines,
            Technology::Liquefaction => &mut self.liquefaction,
            Technology::LocalGrid => &mut self.local_grid,
        };
        *slot = *slot + value;
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExportCostResult {
    /// EUR/kg.
    pub c_h2: f64,
    /// Annual system cost of the optimised design, EUR/yr.
    pub tac_opt: f64,
    /// EUR/yr.
    pub local_grid_cost: f64,
    /// kg/yr.
    pub exported_mass: f64,
    /// EUR/kg by category; sums to `c_h2`.
    pub decomposition: CostBreakdown<f64>,
    /// Share of available renewable energy at built capacity left unused.
    pub curtailment: f64,
    /// Renewable annual cost per available kWh at built capacity, EUR/kWh.
    pub electricity_cost: f64,
}

/// `(TAC + local grid) / m` from annual costs by category (EUR/yr).
pub fn cost_per_kg(annual: CostBreakdown<f64>, exported_kg: f64) -> Result<(f64, CostBreakdown<f64>)> {
    if !(exported_kg > 0.0) || !exported_kg.is_finite() {
        return Err(Error::param("exported mass must be positive"));
    }
    let per_kg = annual.map(|v| v / exported_kg);
    Ok((annual.sum() / exported_kg, per_kg))
}

/// Final cost of a solved scenario. Annual costs are recomputed from the
/// built capacities so the decomposition adds up to the total.
pub fn export_cost(
    model: &SystemModel,
    solution: &Solution,
    local_grid_cost: f64,
    exported_kg: f64,
) -> Result<ExportCostResult> {
    if !(local_grid_cost >= 0.0) {
        return Err(Error::param("local grid cost must be non-negative"));
    }
    let mut annual = CostBreakdown::zero();
    for (tech, v) in annual_costs_by_technology(model, solution) {
        annual.add(tech, v.max(0.0));
    }
    let tac_opt = annual.sum();
    annual.local_grid += local_grid_cost;
    let (c_h2, decomposition) = cost_per_kg(annual, exported_kg)?;

    let (used, available) = res_energy(model, solution);
    let curtailment = if available > 0.0 { (1.0 - used / available).clamp(0.0, 1.0) } else { 0.0 };
    let annual_available = available * HOURS_PER_YEAR as f64 / model.hours as f64;
    let electricity_cost = if annual_available > 0.0 { annual.res / annual_available } else { 0.0 };

    Ok(ExportCostResult {
        c_h2,
        tac_opt,
        local_grid_cost,
        exported_mass: exported_kg,
        decomposition,
        curtailment,
        electricity_cost,
    })
}

/// Generated and available renewable energy over the horizon, kWh.
pub fn res_energy(model: &SystemModel, solution: &Solution) -> (f64, f64) {
    let mut used = 0.0;
    let mut available = 0.0;
    for (k, c) in model.clusters.iter().enumerate() {
        let cap = solution.value(model.layout.res_cap[k]).max(0.0);
        for t in 0..model.hours {
            used += solution.value(model.layout.gen[k][t]).max(0.0);
            available += cap * c.cf[t];
        }
    }
    (used.min(available), available)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CountryGroup {
    I,
    II,
    III,
}

/// Potential below which a country counts as a small exporter, kWh_LHV/yr.
pub const SMALL_EXPORTER_KWH: f64 = 1e12;
/// Highest cost of a group I curve, EUR/kg.
pub const GROUP_I_MAX_COST: f64 = 2.5;

/// Group III: potential under 1 PWh/yr; group I: every point at or below
/// 2.50 EUR/kg; group II otherwise.
pub fn classify_group(curve: &CostPotentialCurve) -> Result<CountryGroup> {
    if curve.points.is_empty() {
        return Err(Error::input(format!("curve of {} has no points", curve.country_id)));
    }
    if curve.max_export < SMALL_EXPORTER_KWH {
        return Ok(CountryGroup::III);
    }
    if curve.points.iter().all(|p| p.c_h2 <= GROUP_I_MAX_COST) {
        Ok(CountryGroup::I)
    } else {
        Ok(CountryGroup::II)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_example() {
        let annual = CostBreakdown { res: 1.0e9, local_grid: 5.0e7, ..CostBreakdown::zero() };
        let (c, parts) = cost_per_kg(annual, 5e8).unwrap();
        assert!((c - 2.10).abs() < 1e-12);
        assert!((parts.sum() - c).abs() < 1e-12);
        assert!(cost_per_kg(annual, 0.0).is_err());
    }

    #[test]
    fn homogeneous() {
        let annual = CostBreakdown { res: 3.0e8, pem: 1.0e8, ..CostBreakdown::zero() };
        let (a, _) = cost_per_kg(annual, 1e8).unwrap();
        let (b, _) = cost_per_kg(annual.map(|v| 2.0 * v), 2e8).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn breakdown_generic_over_f32() {
        let mut b = CostBreakdown::<f32>::zero();
        b.add(Technology::Wind, 1.5);
        b.add(Technology::Pv, 0.5);
        assert_eq!(b.res, 2.0);
        assert_eq!(b.sum(), 2.0);
    }
}
