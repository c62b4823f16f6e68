//! LP solution, liquefier sizing by fixed-point iteration, and independent
//! verification of solutions.

mod highs_backend;
pub mod liquefaction;
mod verify;

pub use liquefaction::{liq_specific_capex, liq_specific_capex_for, liq_total_capex};
pub use verify::{verify_solution, VerificationReport, VERIFY_TOLERANCE};

use log::debug;
use serde::{Deserialize, Serialize};

use crate::datamodel::{ScenarioConfig, TechnoEconomics, Technology, HOURS_PER_YEAR};
use crate::error::{Error, Result};
use crate::esm::{build_model_with_demand, SystemModel, VarKey};
use crate::network::RegionGraph;
use crate::potentials::{annual_el_potential, max_export, ClusterPotential};

/// Iteration cap of the liquefier sizing loop.
pub const MAX_FIXED_POINT_ITERATIONS: usize = 20;
/// Relative size change below which the sizing loop stops.
pub const FIXED_POINT_TOLERANCE: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolverStatus {
    Optimal,
    Suboptimal,
    Infeasible,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolverMethod {
    Simplex,
    Ipm,
    Choose,
}

impl SolverMethod {
    fn as_str(self) -> &'static str {
        match self {
            SolverMethod::Simplex => "simplex",
            SolverMethod::Ipm => "ipm",
            SolverMethod::Choose => "choose",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SolverOptions {
    pub method: SolverMethod,
    pub primal_feasibility_tolerance: f64,
    pub dual_feasibility_tolerance: f64,
    pub time_limit_s: Option<f64>,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            method: SolverMethod::Simplex,
            primal_feasibility_tolerance: 1e-9,
            dual_feasibility_tolerance: 1e-9,
            time_limit_s: None,
        }
    }
}

/// Primal solution of a [`SystemModel`].
#[derive(Debug, Clone, PartialEq)]
pub struct Solution {
    pub status: SolverStatus,
    pub raw_status: String,
    /// Solver objective, EUR over the model horizon.
    pub objective: f64,
    /// Column values in model units (kW, kWh).
    pub values: Vec<f64>,
}

impl Solution {
    pub fn value(&self, column: usize) -> f64 {
        self.values[column]
    }
}

/// Solves the LP of an assembled model.
pub fn solve_model(model: &SystemModel, opts: &SolverOptions) -> Result<Solution> {
    highs_backend::solve_lp(model, opts)
}

/// Total annual cost (EUR/yr) by technology, recomputed from capacities.
pub fn annual_costs_by_technology(model: &SystemModel, solution: &Solution) -> Vec<(Technology, f64)> {
    let mut out: Vec<(Technology, f64)> = Technology::ALL.iter().map(|&t| (t, 0.0)).collect();
    let scale = HOURS_PER_YEAR as f64 / model.hours as f64;
    for (col, &x) in model.lp.columns.iter().zip(&solution.values) {
        if let Some(tech) = col.tech {
            if let Some(slot) = out.iter_mut().find(|(t, _)| *t == tech) {
                slot.1 += col.cost * x * scale;
            }
        }
    }
    out
}

/// Shared read-only inputs of a scenario.
#[derive(Debug, Clone, Copy)]
pub struct ScenarioInputs<'a> {
    pub clusters: &'a [ClusterPotential],
    pub graph: &'a RegionGraph,
    pub te: &'a TechnoEconomics,
}

/// One pass of the liquefier sizing loop.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FixedPointStep {
    pub assumed_size_gw: f64,
    pub specific_capex: f64,
    pub chosen_size_gw: f64,
    /// LP objective scaled to a year, EUR/yr.
    pub objective: f64,
    /// Annual cost with the liquefier priced at its chosen size.
    pub consistent_cost: f64,
}

/// Result of [`solve_scenario`].
#[derive(Debug, Clone)]
pub struct ScenarioSolution {
    pub model: SystemModel,
    pub solution: Solution,
    /// Liquefier capacity chosen by the returned LP, GW_LHV.
    pub liq_size_gw: f64,
    pub converged: bool,
    pub trace: Vec<FixedPointStep>,
}

impl ScenarioSolution {
    pub fn status(&self) -> SolverStatus {
        self.solution.status
    }

    pub fn iterations(&self) -> usize {
        self.trace.len()
    }

    /// Annualised solver objective (TAC), EUR/yr.
    pub fn tac(&self) -> f64 {
        self.solution.objective / self.model.year_share()
    }
}

/// Solves a scenario, iterating the liquefier specific capex until the
/// assumed and optimal plant sizes agree.
///
/// Starts from the demand-implied average throughput. Stops when the
/// relative size change falls below [`FIXED_POINT_TOLERANCE`]; after
/// [`MAX_FIXED_POINT_ITERATIONS`] the cheapest iterate (liquefier priced at
/// its chosen size) is returned with `converged = false`.
pub fn solve_scenario(
    inputs: ScenarioInputs<'_>,
    cfg: &ScenarioConfig,
    opts: &SolverOptions,
) -> Result<ScenarioSolution> {
    cfg.validate()?;
    let te = cfg.technoeconomics(inputs.te)?;
    let potential = annual_el_potential(inputs.clusters, cfg.horizon_hours);
    let max = max_export(potential, &te, cfg.year)?;
    let hourly = cfg.export_fraction * max / HOURS_PER_YEAR as f64;
    solve_scenario_with_demand(inputs, cfg, hourly, opts)
}

/// As [`solve_scenario`] with an explicit hourly offtake in kWh_LHV/h.
pub fn solve_scenario_with_demand(
    inputs: ScenarioInputs<'_>,
    cfg: &ScenarioConfig,
    hourly_demand: f64,
    opts: &SolverOptions,
) -> Result<ScenarioSolution> {
    let te = cfg.technoeconomics(inputs.te)?;
    let cap_gw = cfg.liq_cap_gw(&te);
    let share = cfg.year_share();
    let liq_annuity = te.annualize(Technology::Liquefaction, 1.0)?;

    let mut size = if hourly_demand > 0.0 { hourly_demand / 1e6 } else { 1.0 };
    let mut trace = Vec::new();
    let mut best: Option<(f64, ScenarioSolution)> = None;
    let mut session: Option<highs_backend::LpSession> = None;

    for _ in 0..MAX_FIXED_POINT_ITERATIONS {
        let specific = liq_specific_capex_for(size, &te, cap_gw)?;
        let model = build_model_with_demand(inputs.clusters, inputs.graph, inputs.te, cfg, hourly_demand, specific)?;
        let lp = match session.take() {
            Some(s) if s.accepts(&model) => session.insert(s),
            _ => session.insert(highs_backend::LpSession::new(&model, opts)?),
        };
        let solution = lp.solve(&model)?;
        match solution.status {
            SolverStatus::Infeasible => {
                return Err(Error::Infeasible {
                    status: solution.raw_status.clone(),
                    diagnostics: format!(
                        "{} ({} y, fraction {}): hourly demand {hourly_demand:.6e} kWh, max export {:.6e} kWh/yr, {} columns, {} rows",
                        cfg.country_id,
                        cfg.year,
                        cfg.export_fraction,
                        model.max_export_kwh,
                        model.lp.columns.len(),
                        model.lp.rows.len()
                    ),
                });
            }
            SolverStatus::Suboptimal => {
                trace.push(FixedPointStep {
                    assumed_size_gw: size,
                    specific_capex: specific,
                    chosen_size_gw: f64::NAN,
                    objective: solution.objective / share,
                    consistent_cost: f64::NAN,
                });
                return Ok(ScenarioSolution {
                    liq_size_gw: f64::NAN,
                    model,
                    solution,
                    converged: false,
                    trace,
                });
            }
            SolverStatus::Optimal => {}
        }

        let cap_kw = solution.value(model.layout.liq_cap).max(0.0);
        let chosen = cap_kw / 1e6;
        let objective = solution.objective / share;
        let repriced = if chosen > 0.0 {
            liq_specific_capex_for(chosen, &te, cap_gw)?
        } else {
            specific
        };
        let consistent = objective + (repriced - specific) * liq_annuity * cap_kw;
        let step = FixedPointStep {
            assumed_size_gw: size,
            specific_capex: specific,
            chosen_size_gw: chosen,
            objective,
            consistent_cost: consistent,
        };
        debug!("fixed point: {step:?}");
        trace.push(step);

        let done = chosen == 0.0 || ((chosen - size) / size).abs() < FIXED_POINT_TOLERANCE;
        let candidate = ScenarioSolution {
            model,
            solution,
            liq_size_gw: chosen,
            converged: done,
            trace: Vec::new(),
        };
        if done {
            return Ok(ScenarioSolution { trace, ..candidate });
        }
        if best.as_ref().is_none_or(|(c, _)| consistent < *c) {
            best = Some((consistent, candidate));
        }
        size = chosen;
    }

    let (_, best) = best.expect("at least one iterate");
    Ok(ScenarioSolution {
        trace,
        converged: false,
        ..best
    })
}

/// Capacity values of a solution keyed by variable, in model units.
pub fn capacities(model: &SystemModel, solution: &Solution) -> Vec<(VarKey, f64)> {
    model
        .lp
        .columns
        .iter()
        .zip(&solution.values)
        .filter(|(c, _)| c.key.is_capacity())
        .map(|(c, &v)| (c.key, v))
        .collect()
}
