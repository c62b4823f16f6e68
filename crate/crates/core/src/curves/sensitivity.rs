//! One-at-a-time sensitivity of the hydrogen cost.

use serde::{Deserialize, Serialize};

use crate::datamodel::{LiquefactionCap, ScenarioConfig};
use crate::error::Result;

/// Train size of the reference case, t/d.
pub const REFERENCE_LIQ_CAP_TPD: f64 = 20_000.0;
/// Small-train variant, t/d.
pub const SMALL_LIQ_CAP_TPD: f64 = 700.0;

const CAPEX_FACTORS: [f64; 2] = [0.7, 1.3];
const CAPEX_GROUPS: [(&str, &str); 3] = [("pv", "capex_pv"), ("wind", "capex_wind"), ("pem", "capex_pem")];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SensitivityVariant {
    /// Parameter group, e.g. `pv` or `liquefaction`.
    pub group: String,
    /// Variant label, e.g. `capex_x0.7` or `cap_700tpd`.
    pub name: String,
}

/// The reference configuration followed by every variant.
pub fn sensitivity_configs(base: &ScenarioConfig) -> (ScenarioConfig, Vec<(SensitivityVariant, ScenarioConfig)>) {
    let mut reference = base.clone();
    reference.liq_size_cap = Some(LiquefactionCap::Tpd(REFERENCE_LIQ_CAP_TPD));

    let mut variants = Vec::new();
    for (group, key) in CAPEX_GROUPS {
        for f in CAPEX_FACTORS {
            let mut cfg = reference.clone();
            *cfg.overrides.entry(key.to_string()).or_insert(1.0) *= f;
            variants.push((
                SensitivityVariant {
                    group: group.into(),
                    name: format!("capex_x{f}"),
                },
                cfg,
            ));
        }
    }
    let mut small = reference.clone();
    small.liq_size_cap = Some(LiquefactionCap::Tpd(SMALL_LIQ_CAP_TPD));
    variants.push((
        SensitivityVariant {
            group: "liquefaction".into(),
            name: format!("cap_{SMALL_LIQ_CAP_TPD}tpd"),
        },
        small,
    ));
    let mut unbounded = reference.clone();
    unbounded.liq_size_cap = Some(LiquefactionCap::Unbounded);
    variants.push((
        SensitivityVariant {
            group: "liquefaction".into(),
            name: "unbounded".into(),
        },
        unbounded,
    ));
    (reference, variants)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SensitivityRow {
    pub variant: SensitivityVariant,
    /// EUR/kg, absent when the variant failed.
    pub cost: Option<f64>,
    /// `(c − c_ref) / c_ref`.
    pub relative_change: Option<f64>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SensitivityTable {
    pub reference_cost: f64,
    pub rows: Vec<SensitivityRow>,
    /// Mean absolute relative change per group over its successful variants.
    pub impact: Vec<(String, Option<f64>)>,
}

/// Tabulates variant results against the reference cost.
pub fn sensitivity_table(reference_cost: f64, results: Vec<(SensitivityVariant, Result<f64>)>) -> SensitivityTable {
    let rows: Vec<SensitivityRow> = results
        .into_iter()
        .map(|(variant, r)| match r {
            Ok(c) => SensitivityRow {
                variant,
                cost: Some(c),
                relative_change: Some((c - reference_cost) / reference_cost),
                error: None,
            },
            Err(e) => SensitivityRow {
                variant,
                cost: None,
                relative_change: None,
                error: Some(e.to_string()),
            },
        })
        .collect();
    let mut groups: Vec<String> = Vec::new();
    for r in &rows {
        if !groups.contains(&r.variant.group) {
            groups.push(r.variant.group.clone());
        }
    }
    let impact = groups
        .into_iter()
        .map(|g| {
            let changes: Vec<f64> = rows
                .iter()
                .filter(|r| r.variant.group == g)
                .filter_map(|r| r.relative_change.map(f64::abs))
                .collect();
            let mean = (!changes.is_empty()).then(|| changes.iter().sum::<f64>() / changes.len() as f64);
            (g, mean)
        })
        .collect();
    SensitivityTable {
        reference_cost,
        rows,
        impact,
    }
}

/// Runs the reference and every variant through `run`, which returns the
/// hydrogen cost in EUR/kg. A failing variant is recorded, a failing
/// reference is an error.
pub fn sensitivity_sweep(base: &ScenarioConfig, run: impl Fn(&ScenarioConfig) -> Result<f64>) -> Result<SensitivityTable> {
    let (reference, variants) = sensitivity_configs(base);
    let reference_cost = run(&reference)?;
    let results = variants.into_iter().map(|(v, cfg)| {
        let r = run(&cfg);
        (v, r)
    });
    Ok(sensitivity_table(reference_cost, results.collect()))
}
