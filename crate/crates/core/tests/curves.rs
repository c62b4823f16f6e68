mod common;

use common::*;
use h2export::curves::{
    build_curve, cumulative_by_attribute, export_levels, sensitivity_sweep, water_demand, AttributeKey,
    CostPotentialCurve, CountryAttributes, CurvePoint, ScenarioPoint,
};
use h2export::datamodel::{TechnoEconomics, Year};
use h2export::pipeline::{run_scenario, PipelineInputs, ScenarioOutcome};
use h2export::postproc::{classify_group, CostBreakdown, CountryGroup, ExportCostResult};
use h2export::potentials::{cluster_all, Placement, PlacementInfo, Resource};
use h2export::solve::{ScenarioInputs, SolverOptions, SolverStatus};
use proptest::prelude::*;

fn result(c: f64) -> ExportCostResult {
    ExportCostResult {
        c_h2: c,
        tac_opt: 0.0,
        local_grid_cost: 0.0,
        exported_mass: 1.0,
        decomposition: CostBreakdown::zero(),
        curtailment: 0.0,
        electricity_cost: 0.0,
    }
}

fn curve(country: &str, max: f64, pts: &[(f64, f64)]) -> CostPotentialCurve {
    CostPotentialCurve {
        country_id: country.into(),
        year: Year::Y2050,
        points: pts
            .iter()
            .map(|&(e, c)| CurvePoint { export_kwh: e, c_h2: c, result: result(c) })
            .collect(),
        max_export: max,
    }
}

proptest! {
    #[test]
    fn levels_are_evenly_spaced(m in 1e-3f64..1e15) {
        let l = export_levels(m).unwrap();
        prop_assert_eq!(l[8], 0.95 * m);
        prop_assert!((l[0] / m - 0.95 / 9.0).abs() <= 4.0 * f64::EPSILON);
        prop_assert!((l[0] / l[8] - 1.0 / 9.0).abs() <= 4.0 * f64::EPSILON);
        prop_assert!(l.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn pooled_quantities_are_conserved(
        pts in proptest::collection::vec((1u32..1000, 1.0f64..8.0), 1..20),
        split in 0usize..20,
    ) {
        let mut curves = Vec::new();
        let mut attrs = Vec::new();
        for (i, (q, c)) in pts.iter().enumerate() {
            let id = format!("C{i}");
            curves.push(curve(&id, 1e4, &[(*q as f64 * 1.37, *c)]));
            let regime = if i < split { "hybrid" } else { "working_democracy" };
            attrs.push(CountryAttributes { country_id: id, regime: Some(regime.parse().unwrap()), water_stress: None });
        }
        let pooled = cumulative_by_attribute(&curves, &attrs, AttributeKey::Regime).unwrap();
        let classes: u64 = pooled.classes.values().map(|v| v.last().unwrap().cumulative_kwh).sum();
        prop_assert_eq!(classes, pooled.merged.last().unwrap().cumulative_kwh);
        prop_assert!(pooled.merged.windows(2).all(|w| w[0].cost <= w[1].cost));
    }
}

#[test]
fn water_for_one_petawatt_hour() {
    let kg: f64 = 1e12 / 33.33;
    let litres = water_demand(kg).unwrap();
    assert!((litres - 2.70e11).abs() / 2.70e11 < 1e-3);
}

#[test]
fn groups() {
    let flat = curve("I", 50e12, &[(10e12, 2.1), (40e12, 2.1)]);
    assert_eq!(classify_group(&flat).unwrap(), CountryGroup::I);
    let small = curve("III", 0.5e12, &[(0.1e12, 9.0)]);
    assert_eq!(classify_group(&small).unwrap(), CountryGroup::III);
    let rising = curve("II", 30e12, &[(5e12, 2.6), (25e12, 6.0)]);
    assert_eq!(classify_group(&rising).unwrap(), CountryGroup::II);
    assert!(classify_group(&curve("E", 1.0, &[])).is_err());
}

#[test]
fn build_curve_keeps_level_exports() {
    let levels = export_levels(90.0).unwrap();
    let pts: Vec<ScenarioPoint> = levels
        .iter()
        .map(|&e| ScenarioPoint { label: format!("{e}"), export_kwh: e, status: SolverStatus::Optimal, cost: Some(result(2.0)) })
        .collect();
    let (c, _) = build_curve("X", Year::Y2050, 90.0, &pts).unwrap();
    let got: Vec<f64> = c.points.iter().map(|p| p.export_kwh).collect();
    assert_eq!(got, levels.to_vec());
}

fn pv_outcome(cfg: &h2export::datamodel::ScenarioConfig) -> h2export::Result<ScenarioOutcome> {
    let te = TechnoEconomics::default();
    let cf = vec![1.0; 24];
    let ps = vec![Placement {
        id: "a".into(),
        tech: Resource::Pv,
        region: "R".into(),
        location: h2export::geo::GeoPoint::new(20.0, 56.0).unwrap(),
        capacity_kw: 1e6,
        cf,
    }];
    let clusters = cluster_all(&ps).unwrap();
    let infos: Vec<PlacementInfo> = ps.iter().map(PlacementInfo::from).collect();
    let graph = one_region();
    run_scenario(
        PipelineInputs { scenario: ScenarioInputs { clusters: &clusters, graph: &graph, te: &te }, placements: &infos },
        cfg,
        &SolverOptions::default(),
    )
}

#[test]
fn pv_capex_sensitivity_moves_res_component_proportionally() {
    let base = cfg(24);
    let reference = pv_outcome(&base).unwrap().post.unwrap().cost;
    let table = sensitivity_sweep(&base, |c| Ok(pv_outcome(c)?.post.unwrap().cost.c_h2)).unwrap();
    assert_eq!(table.reference_cost, reference.c_h2);
    let share = reference.decomposition.res / reference.c_h2;
    for row in table.rows.iter().filter(|r| r.variant.group == "pv") {
        let f: f64 = row.variant.name.trim_start_matches("capex_x").parse().unwrap();
        let expected = (f - 1.0) * share;
        assert!((row.relative_change.unwrap() - expected).abs() < 1e-6, "{row:?}");
    }
    // Tiny plant: the train cap never binds.
    let unbounded = table.rows.iter().find(|r| r.variant.name == "unbounded").unwrap();
    assert_eq!(unbounded.relative_change, Some(0.0));
    let wind = table.impact.iter().find(|(g, _)| g == "wind").unwrap().1.unwrap();
    assert_eq!(wind, 0.0);
}
