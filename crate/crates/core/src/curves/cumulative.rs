//! Supply curves pooled by political regime or water stress.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use log::warn;
use serde::{Deserialize, Serialize};

use super::CostPotentialCurve;
use crate::error::{Error, Result};

macro_rules! label_enum {
    ($name:ident { $($variant:ident => $label:literal),+ $(,)? }) => {
        #[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
        pub enum $name {
            $(#[serde(rename = $label)] $variant),+
        }

        impl $name {
            pub const ALL: &'static [$name] = &[$($name::$variant),+];

            pub fn as_str(self) -> &'static str {
                match self {
                    $($name::$variant => $label),+
                }
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.as_str())
            }
        }

        impl FromStr for $name {
            type Err = Error;

            fn from_str(s: &str) -> Result<Self> {
                let key = s.trim().to_ascii_lowercase().replace([' ', '-'], "_");
                $name::ALL
                    .iter()
                    .copied()
                    .find(|v| v.as_str() == key)
                    .ok_or_else(|| Error::input(format!("unknown {} class {s:?}", stringify!($name))))
            }
        }
    };
}

label_enum!(RegimeClass {
    WorkingDemocracy => "working_democracy",
    DeficientDemocracy => "deficient_democracy",
    Hybrid => "hybrid",
    ModerateAutocracy => "moderate_autocracy",
    HardAutocracy => "hard_autocracy",
});

label_enum!(WaterStress {
    Low => "low",
    LowMedium => "low_medium",
    MediumHigh => "medium_high",
    High => "high",
    ExtremelyHigh => "extremely_high",
});

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountryAttributes {
    pub country_id: String,
    pub regime: Option<RegimeClass>,
    pub water_stress: Option<WaterStress>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AttributeKey {
    Regime,
    WaterStress,
}

impl CountryAttributes {
    pub fn class(&self, key: AttributeKey) -> Option<String> {
        match key {
            AttributeKey::Regime => self.regime.map(|r| r.to_string()),
            AttributeKey::WaterStress => self.water_stress.map(|w| w.to_string()),
        }
    }
}

/// One step of a pooled supply curve. Quantities are whole kWh so that
/// totals are exact regardless of summation order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SupplyStep {
    pub country_id: String,
    /// Increment supplied at this cost, kWh_LHV/yr.
    pub quantity_kwh: u64,
    /// Cumulative quantity at the end of the step.
    pub cumulative_kwh: u64,
    /// EUR/kg.
    pub cost: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CumulativeCurves {
    pub key: AttributeKey,
    pub classes: BTreeMap<String, Vec<SupplyStep>>,
    pub merged: Vec<SupplyStep>,
    /// Countries without the attribute.
    pub excluded: Vec<String>,
}

fn pool(mut steps: Vec<(String, u64, f64)>) -> Vec<SupplyStep> {
    steps.sort_by(|a, b| a.2.total_cmp(&b.2).then_with(|| a.0.cmp(&b.0)).then(a.1.cmp(&b.1)));
    let mut cum = 0u64;
    steps
        .into_iter()
        .map(|(country_id, q, cost)| {
            cum += q;
            SupplyStep {
                country_id,
                quantity_kwh: q,
                cumulative_kwh: cum,
                cost,
            }
        })
        .collect()
}

/// Pools curve points per attribute class, sorted by cost. Each point
/// contributes the export increment over the country's previous point.
pub fn cumulative_by_attribute(
    curves: &[CostPotentialCurve],
    attributes: &[CountryAttributes],
    key: AttributeKey,
) -> Result<CumulativeCurves> {
    let attrs: BTreeMap<&str, &CountryAttributes> = attributes.iter().map(|a| (a.country_id.as_str(), a)).collect();
    let mut classes: BTreeMap<String, Vec<(String, u64, f64)>> = BTreeMap::new();
    let mut merged = Vec::new();
    let mut excluded = Vec::new();
    for curve in curves {
        let Some(class) = attrs.get(curve.country_id.as_str()).and_then(|a| a.class(key)) else {
            warn!("{} has no {key:?} attribute; excluded from the pooled curves", curve.country_id);
            excluded.push(curve.country_id.clone());
            continue;
        };
        let mut prev = 0u64;
        for p in &curve.points {
            let end = p.export_kwh.round().max(0.0) as u64;
            let q = end.saturating_sub(prev);
            prev = end.max(prev);
            let step = (curve.country_id.clone(), q, p.c_h2);
            classes.entry(class.clone()).or_default().push(step.clone());
            merged.push(step);
        }
    }
    excluded.sort();
    excluded.dedup();
    Ok(CumulativeCurves {
        key,
        classes: classes.into_iter().map(|(k, v)| (k, pool(v))).collect(),
        merged: pool(merged),
        excluded,
    })
}

fn cost_at(steps: &[SupplyStep], q: u64) -> Option<f64> {
    steps.iter().find(|s| s.cumulative_kwh >= q).map(|s| s.cost)
}

/// Relative premium of `subset` over `all` at cumulative quantity `q`.
/// `None` when either curve ends before `q`.
pub fn premium(subset: &[SupplyStep], all: &[SupplyStep], q: u64) -> Option<f64> {
    let a = cost_at(all, q)?;
    let s = cost_at(subset, q)?;
    Some(s / a - 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curves::CurvePoint;
    use crate::datamodel::Year;
    use crate::postproc::{CostBreakdown, ExportCostResult};

    fn flat(country: &str, cost: f64, exports: &[f64]) -> CostPotentialCurve {
        let result = ExportCostResult {
            c_h2: cost,
            tac_opt: 0.0,
            local_grid_cost: 0.0,
            exported_mass: 1.0,
            decomposition: CostBreakdown::zero(),
            curtailment: 0.0,
            electricity_cost: 0.0,
        };
        CostPotentialCurve {
            country_id: country.into(),
            year: Year::Y2050,
            points: exports
                .iter()
                .map(|&e| CurvePoint { export_kwh: e, c_h2: cost, result: result.clone() })
                .collect(),
            max_export: 100.0,
        }
    }

    fn attrs(country: &str, regime: &str) -> CountryAttributes {
        CountryAttributes {
            country_id: country.into(),
            regime: Some(regime.parse().unwrap()),
            water_stress: None,
        }
    }

    #[test]
    fn two_step_construction_and_premium() {
        let curves = [flat("A", 2.0, &[10.0]), flat("B", 3.0, &[10.0])];
        let at = [attrs("A", "working democracy"), attrs("B", "hard_autocracy")];
        let c = cumulative_by_attribute(&curves, &at, AttributeKey::Regime).unwrap();
        let costs: Vec<(u64, f64)> = c.merged.iter().map(|s| (s.cumulative_kwh, s.cost)).collect();
        assert_eq!(costs, vec![(10, 2.0), (20, 3.0)]);
        let hard = &c.classes["hard_autocracy"];
        assert_eq!(premium(hard, &c.merged, 10), Some(0.5));
    }

    #[test]
    fn conservation_and_exclusion() {
        let curves = [flat("A", 2.0, &[10.0, 20.0]), flat("B", 3.0, &[5.0]), flat("C", 1.0, &[7.0])];
        let at = [attrs("A", "hybrid"), attrs("B", "hybrid")];
        let c = cumulative_by_attribute(&curves, &at, AttributeKey::Regime).unwrap();
        assert_eq!(c.excluded, vec!["C".to_string()]);
        let class_total: u64 = c.classes.values().map(|v| v.last().unwrap().cumulative_kwh).sum();
        assert_eq!(class_total, c.merged.last().unwrap().cumulative_kwh);
        assert_eq!(class_total, 25);
    }

    #[test]
    fn unknown_label_rejected() {
        assert!("theocracy".parse::<RegimeClass>().is_err());
        assert_eq!("Extremely High".parse::<WaterStress>().unwrap(), WaterStress::ExtremelyHigh);
    }
}
