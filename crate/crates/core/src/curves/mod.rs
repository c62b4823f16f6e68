//! Cost-potential curves, sensitivity sweeps, attribute-sorted supply
//! curves and water demand.

mod cumulative;
mod sensitivity;

pub use cumulative::{
    cumulative_by_attribute, premium, AttributeKey, CountryAttributes, CumulativeCurves, RegimeClass, SupplyStep,
    WaterStress,
};
pub use sensitivity::{
    sensitivity_configs, sensitivity_sweep, sensitivity_table, SensitivityRow, SensitivityTable, SensitivityVariant,
    REFERENCE_LIQ_CAP_TPD, SMALL_LIQ_CAP_TPD,
};

use log::info;
use num_traits::Float;
use serde::{Deserialize, Serialize};

use crate::datamodel::{Year, MAX_EXPORT_FRACTION};
use crate::error::{Error, Result};
use crate::postproc::ExportCostResult;
use crate::solve::SolverStatus;

/// Number of export levels per country and year.
pub const EXPORT_LEVELS: usize = 9;

/// Water consumed per kg of hydrogen, litres.
pub const WATER_L_PER_KG: f64 = 9.0;

/// Nine evenly spaced export amounts up to 95% of `max_export`:
/// `k · 0.95 · M / 9` for `k = 1..9`.
pub fn export_levels<T: Float>(max_export: T) -> Result<[T; EXPORT_LEVELS]> {
    if !(max_export > T::zero()) || !max_export.is_finite() {
        return Err(Error::param("maximum export must be positive"));
    }
    let top = T::from(MAX_EXPORT_FRACTION).unwrap() * max_export;
    let n = T::from(EXPORT_LEVELS).unwrap();
    let mut out = [T::zero(); EXPORT_LEVELS];
    for (k, slot) in out.iter_mut().enumerate() {
        *slot = if k + 1 == EXPORT_LEVELS {
            top
        } else {
            top * T::from(k + 1).unwrap() / n
        };
    }
    Ok(out)
}

/// The export fractions matching [`export_levels`].
pub fn export_fractions() -> [f64; EXPORT_LEVELS] {
    let mut out = [0.0; EXPORT_LEVELS];
    for (k, slot) in out.iter_mut().enumerate() {
        *slot = if k + 1 == EXPORT_LEVELS {
            MAX_EXPORT_FRACTION
        } else {
            MAX_EXPORT_FRACTION * (k + 1) as f64 / EXPORT_LEVELS as f64
        };
    }
    out
}

/// Litres of water for `exported_kg` of hydrogen.
pub fn water_demand<T: Float>(exported_kg: T) -> Result<T> {
    if !(exported_kg >= T::zero()) {
        return Err(Error::param("exported mass must be non-negative"));
    }
    Ok(exported_kg * T::from(WATER_L_PER_KG).unwrap())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    /// kWh_LHV/yr.
    pub export_kwh: f64,
    /// EUR/kg.
    pub c_h2: f64,
    pub result: ExportCostResult,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CostPotentialCurve {
    pub country_id: String,
    pub year: Year,
    /// Strictly increasing in export.
    pub points: Vec<CurvePoint>,
    /// kWh_LHV/yr.
    pub max_export: f64,
}

impl CostPotentialCurve {
    /// Largest exported amount on the curve, kWh_LHV/yr.
    pub fn total_export(&self) -> f64 {
        self.points.last().map_or(0.0, |p| p.export_kwh)
    }
}

/// Outcome of one scenario as seen by curve assembly.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioPoint {
    pub label: String,
    pub export_kwh: f64,
    pub status: SolverStatus,
    /// Present for solved scenarios.
    pub cost: Option<ExportCostResult>,
}

/// Assembles a curve from the optimal scenarios of one country and year.
/// Returns the curve and the labels of the excluded runs.
pub fn build_curve(
    country_id: &str,
    year: Year,
    max_export: f64,
    scenarios: &[ScenarioPoint],
) -> Result<(CostPotentialCurve, Vec<String>)> {
    let mut excluded = Vec::new();
    let mut points = Vec::new();
    for s in scenarios {
        match (&s.status, &s.cost) {
            (SolverStatus::Optimal, Some(cost)) => {
                if s.export_kwh > MAX_EXPORT_FRACTION * max_export * (1.0 + 1e-12) {
                    return Err(Error::input(format!(
                        "{}: export {} exceeds 95% of the maximum {}",
                        s.label, s.export_kwh, max_export
                    )));
                }
                points.push(CurvePoint {
                    export_kwh: s.export_kwh,
                    c_h2: cost.c_h2,
                    result: cost.clone(),
                });
            }
            _ => {
                info!("excluding {} from the {country_id} {year} curve: {:?}", s.label, s.status);
                excluded.push(s.label.clone());
            }
        }
    }
    if points.is_empty() {
        return Err(Error::input(format!("no optimal scenario for {country_id} {year}")));
    }
    points.sort_by(|a, b| a.export_kwh.total_cmp(&b.export_kwh));
    if let Some(w) = points.windows(2).find(|w| !(w[0].export_kwh < w[1].export_kwh)) {
        return Err(Error::input(format!(
            "duplicate export level {} for {country_id} {year}",
            w[1].export_kwh
        )));
    }
    Ok((
        CostPotentialCurve {
            country_id: country_id.to_string(),
            year,
            points,
            max_export,
        },
        excluded,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::postproc::CostBreakdown;

    #[test]
    fn levels_for_ninety() {
        let l = export_levels(90.0).unwrap();
        assert_eq!(l, [9.5, 19.0, 28.5, 38.0, 47.5, 57.0, 66.5, 76.0, 85.5]);
        let nine = export_levels(9.0).unwrap();
        assert_eq!(nine[8], 0.95 * 9.0);
        assert!((nine[8] - 8.55).abs() < 1e-12);
        assert!(export_levels(0.0).is_err());
        assert!(export_levels(-1.0f32).is_err());
    }

    #[test]
    fn water() {
        assert_eq!(water_demand(1.0).unwrap(), 9.0);
        assert_eq!(water_demand(0.0).unwrap(), 0.0);
        assert!(water_demand(-1.0).is_err());
    }

    fn point(label: &str, export: f64, status: SolverStatus) -> ScenarioPoint {
        let cost = ExportCostResult {
            c_h2: 2.0 + export / 100.0,
            tac_opt: 1.0,
            local_grid_cost: 0.0,
            exported_mass: 1.0,
            decomposition: CostBreakdown::zero(),
            curtailment: 0.0,
            electricity_cost: 0.0,
        };
        ScenarioPoint {
            label: label.into(),
            export_kwh: export,
            status,
            cost: (status != SolverStatus::Infeasible).then_some(cost),
        }
    }

    #[test]
    fn curve_drops_non_optimal_and_sorts() {
        let levels = export_levels(90.0).unwrap();
        let mut pts: Vec<ScenarioPoint> = levels
            .iter()
            .enumerate()
            .rev()
            .map(|(k, &e)| point(&format!("l{k}"), e, SolverStatus::Optimal))
            .collect();
        pts[1].status = SolverStatus::Suboptimal;
        pts[4].status = SolverStatus::Infeasible;
        pts[4].cost = None;
        let (c, excluded) = build_curve("X", Year::Y2050, 90.0, &pts).unwrap();
        assert_eq!(c.points.len(), 7);
        assert_eq!(excluded.len(), 2);
        assert!(c.points.windows(2).all(|w| w[0].export_kwh < w[1].export_kwh));
    }

    #[test]
    fn curve_errors() {
        assert!(build_curve("X", Year::Y2050, 90.0, &[point("a", 10.0, SolverStatus::Suboptimal)]).is_err());
        assert!(build_curve("X", Year::Y2050, 90.0, &[point("a", 89.0, SolverStatus::Optimal)]).is_err());
        let one = build_curve("X", Year::Y2050, 90.0, &[point("a", 9.5, SolverStatus::Optimal)]).unwrap();
        assert_eq!(one.0.points.len(), 1);
    }
}
