mod common;

use common::*;
use h2export::datamodel::{ModelOptions, TechnoEconomics};
use h2export::esm::build_model_with_demand;
use h2export::potentials::Resource;
use h2export::solve::{solve_model, verify_solution, SolverOptions, SolverStatus};

const LIQ_CAPEX: f64 = 610.0;

#[test]
fn constant_resource_single_region_matches_closed_form() {
    let te = TechnoEconomics::default();
    let hours = 24;
    let m = build_model_with_demand(
        &[cluster("R", Resource::Pv, 100.0, vec![1.0; hours])],
        &one_region(),
        &te,
        &cfg(hours),
        1.0,
        LIQ_CAPEX,
    )
    .unwrap();
    let s = solve_model(&m, &SolverOptions::default()).unwrap();
    assert_eq!(s.status, SolverStatus::Optimal);

    let pem = 1.0 / 0.74;
    let pv = pem + 0.205;
    let closed = (pv * annual(326.0, 0.01, 25.0) + pem * annual(450.0, 0.015, 19.0) + annual(LIQ_CAPEX, 0.015, 20.0))
        * hours as f64
        / 8760.0;
    assert!((s.objective - closed).abs() / closed < 1e-4, "{} vs {closed}", s.objective);
    assert!((s.value(m.layout.res_cap[0]) - pv).abs() < 1e-6);
    assert!((s.value(m.layout.pem_cap[0]) - pem).abs() < 1e-6);
    assert!((s.value(m.layout.liq_cap) - 1.0).abs() < 1e-6);

    let report = verify_solution(&m, &s);
    assert!(report.passed, "{report:?}");
    assert!(report.objective_mismatch < 1e-9);
}

#[test]
fn zero_demand_builds_nothing() {
    let te = TechnoEconomics::default();
    let m = build_model_with_demand(&[cluster("R", Resource::Wind, 100.0, diurnal(24))], &one_region(), &te, &cfg(24), 0.0, LIQ_CAPEX).unwrap();
    let s = solve_model(&m, &SolverOptions::default()).unwrap();
    assert_eq!(s.status, SolverStatus::Optimal);
    assert!(s.objective.abs() < 1e-12);
    for (c, v) in m.lp.columns.iter().zip(&s.values) {
        if c.key.is_capacity() {
            assert!(v.abs() < 1e-9, "{} = {v}", c.key);
        }
    }
}

#[test]
fn electric_path_oversizes_by_arc_loss() {
    let te = TechnoEconomics::default();
    let mut c = cfg(24);
    c.options = ModelOptions { batteries: false, pipelines: false, electric_grid: true };
    let m = build_model_with_demand(&[cluster("R", Resource::Pv, 100.0, vec![1.0; 24])], &remote_harbor(1000.0), &te, &c, 1.0, LIQ_CAPEX).unwrap();
    let s = solve_model(&m, &SolverOptions::default()).unwrap();
    assert_eq!(s.status, SolverStatus::Optimal);
    let at_harbor = 1.0 / 0.74 + 0.205;
    let expected = at_harbor / 0.99;
    for t in 0..24 {
        let (fw, bw) = m.layout.elec_flow[0][t];
        assert!((s.value(fw) - expected).abs() < 1e-6, "t={t}: {}", s.value(fw));
        assert!(s.value(bw).abs() < 1e-9);
    }
    assert!((s.value(m.layout.res_cap[0]) - expected).abs() < 1e-6);
    assert!(verify_solution(&m, &s).passed);
}

#[test]
fn hydrogen_travels_by_pipeline_and_liquefier_power_by_wire() {
    let te = TechnoEconomics::default();
    let mut c = cfg(24);
    c.options = ModelOptions { batteries: false, pipelines: true, electric_grid: true };
    let m = build_model_with_demand(&[cluster("R", Resource::Pv, 100.0, vec![1.0; 24])], &remote_harbor(200.0), &te, &c, 1.0, LIQ_CAPEX).unwrap();
    let s = solve_model(&m, &SolverOptions::default()).unwrap();
    assert_eq!(s.status, SolverStatus::Optimal);
    for t in 0..24 {
        let (pipe, _) = m.layout.pipe_flow[0][t];
        let (wire, _) = m.layout.elec_flow[0][t];
        assert!((s.value(pipe) - 1.0).abs() < 1e-6);
        assert!((s.value(wire) - 0.205 / 0.998).abs() < 1e-6);
    }
}

#[test]
fn pipeline_alone_cannot_power_the_liquefier() {
    let te = TechnoEconomics::default();
    let mut c = cfg(24);
    c.options = ModelOptions { batteries: false, pipelines: true, electric_grid: false };
    let m = build_model_with_demand(&[cluster("R", Resource::Pv, 100.0, vec![1.0; 24])], &remote_harbor(200.0), &te, &c, 1.0, LIQ_CAPEX).unwrap();
    let s = solve_model(&m, &SolverOptions::default()).unwrap();
    assert_eq!(s.status, SolverStatus::Infeasible);
}

#[test]
fn capex_scaling_scales_objective() {
    let te = TechnoEconomics::default();
    let cl = [cluster("R", Resource::Pv, 50.0, diurnal(48)), cluster("R", Resource::Wind, 50.0, vec![0.35; 48])];
    let base = build_model_with_demand(&cl, &remote_harbor(150.0), &te, &cfg(48), 1.0, LIQ_CAPEX).unwrap();
    let b = solve_model(&base, &SolverOptions::default()).unwrap();

    let alpha = 1.7;
    let mut c = cfg(48);
    for key in ["capex_pv", "capex_wind", "capex_battery", "capex_lh2_tank", "capex_pem", "capex_elec_grid", "capex_pipeline"] {
        c.overrides.insert(key.into(), alpha);
    }
    let scaled = build_model_with_demand(&cl, &remote_harbor(150.0), &te, &c, 1.0, LIQ_CAPEX * alpha).unwrap();
    let s = solve_model(&scaled, &SolverOptions::default()).unwrap();
    assert!((s.objective - alpha * b.objective).abs() / s.objective < 1e-7, "{} vs {}", s.objective, alpha * b.objective);
}

#[test]
fn lower_demand_costs_less() {
    let te = TechnoEconomics::default();
    let cl = [cluster("R", Resource::Pv, 50.0, diurnal(48))];
    let solve = |d: f64| {
        let m = build_model_with_demand(&cl, &one_region(), &te, &cfg(48), d, LIQ_CAPEX).unwrap();
        solve_model(&m, &SolverOptions::default()).unwrap()
    };
    let (hi, lo) = (solve(2.0), solve(1.0));
    assert_eq!(lo.status, SolverStatus::Optimal);
    assert!(lo.objective <= hi.objective);
}

#[test]
fn repeated_solves_are_identical() {
    let te = TechnoEconomics::default();
    let cl = [cluster("R", Resource::Pv, 50.0, diurnal(48)), cluster("R", Resource::Wind, 30.0, vec![0.4; 48])];
    let run = || {
        let m = build_model_with_demand(&cl, &remote_harbor(80.0), &te, &cfg(48), 1.5, LIQ_CAPEX).unwrap();
        solve_model(&m, &SolverOptions::default()).unwrap()
    };
    let (a, b) = (run(), run());
    assert_eq!(a.objective.to_bits(), b.objective.to_bits());
    assert_eq!(a.values, b.values);
}

#[test]
fn energy_is_conserved() {
    let te = TechnoEconomics::default();
    let hours = 48;
    let cl = [cluster("R", Resource::Pv, 50.0, diurnal(hours))];
    let m = build_model_with_demand(&cl, &remote_harbor(300.0), &te, &cfg(hours), 1.0, LIQ_CAPEX).unwrap();
    let s = solve_model(&m, &SolverOptions::default()).unwrap();
    let l = &m.layout;
    let sum = |v: &[usize]| v.iter().map(|&j| s.value(j)).sum::<f64>();
    let generated = sum(&l.gen[0]);
    let pem: f64 = l.pem_in.iter().map(|v| sum(v)).sum();
    let liq_el = 0.205 * sum(&l.liq_in);
    let battery_loss: f64 = (0..l.bat_ch.len()).map(|n| sum(&l.bat_ch[n]) - sum(&l.bat_dis[n])).sum();
    let grid_loss: f64 = l.elec_flow[0].iter().map(|&(f, b)| (s.value(f) + s.value(b)) * 0.003).sum();
    let balance = generated - pem - liq_el - battery_loss - grid_loss;
    assert!(balance.abs() < 1e-6 * generated, "{balance}");
    // Hydrogen: electrolysis output equals liquefier intake; tank closes the cycle.
    let h2 = 0.74 * pem - sum(&l.liq_in);
    assert!(h2.abs() < 1e-6 * pem);
    assert!((sum(&l.liq_in) - hours as f64).abs() < 1e-6 * hours as f64);
}
