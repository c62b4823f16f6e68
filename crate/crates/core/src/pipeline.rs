//! One scenario end to end: fixed-point solve, verification and
//! post-processing.

use serde::{Deserialize, Serialize};

use crate::datamodel::ScenarioConfig;
use crate::error::Result;
use crate::esm::ModelStats;
use crate::postproc::{postprocess, PostprocResult};
use crate::solve::{
    solve_scenario, verify_solution, FixedPointStep, ScenarioInputs, ScenarioSolution, SolverOptions, SolverStatus,
    VerificationReport,
};

/// Everything a scenario reads besides its configuration.
#[derive(Debug, Clone, Copy)]
pub struct PipelineInputs<'a> {
    pub scenario: ScenarioInputs<'a>,
    pub placements: &'a [crate::potentials::PlacementInfo],
}

/// Serializable summary of a solved scenario.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioSummary {
    pub country_id: String,
    pub year: u16,
    pub export_fraction: f64,
    pub status: SolverStatus,
    pub converged: bool,
    pub iterations: usize,
    /// kWh_LHV/yr.
    pub export_kwh: f64,
    /// kWh_LHV/yr.
    pub max_export_kwh: f64,
    pub liq_size_gw: f64,
    /// EUR/yr.
    pub tac: f64,
    pub stats: ModelStats,
    pub trace: Vec<FixedPointStep>,
}

#[derive(Debug, Clone)]
pub struct ScenarioOutcome {
    pub solved: ScenarioSolution,
    pub summary: ScenarioSummary,
    pub verification: VerificationReport,
    /// Absent when the solver stopped short of optimality.
    pub post: Option<PostprocResult>,
}

pub fn run_scenario(inputs: PipelineInputs<'_>, cfg: &ScenarioConfig, opts: &SolverOptions) -> Result<ScenarioOutcome> {
    let solved = solve_scenario(inputs.scenario, cfg, opts)?;
    let verification = verify_solution(&solved.model, &solved.solution);
    let post = if solved.status() == SolverStatus::Optimal {
        let te = cfg.technoeconomics(inputs.scenario.te)?;
        Some(postprocess(
            &solved.model,
            &solved.solution,
            inputs.scenario.clusters,
            inputs.placements,
            inputs.scenario.graph,
            &te,
        )?)
    } else {
        None
    };
    let summary = ScenarioSummary {
        country_id: cfg.country_id.clone(),
        year: cfg.year.value(),
        export_fraction: cfg.export_fraction,
        status: solved.status(),
        converged: solved.converged,
        iterations: solved.iterations(),
        export_kwh: solved.model.demand.annual_kwh(),
        max_export_kwh: solved.model.max_export_kwh,
        liq_size_gw: solved.liq_size_gw,
        tac: solved.tac(),
        stats: solved.model.stats(),
        trace: solved.trace.clone(),
    };
    Ok(ScenarioOutcome {
        solved,
        summary,
        verification,
        post,
    })
}
