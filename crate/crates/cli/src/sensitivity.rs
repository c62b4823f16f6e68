//! `sensitivity`: reference case plus one-at-a-time variants per country.

use std::path::PathBuf;

use h2export::curves::{sensitivity_configs, sensitivity_table, SensitivityTable};
use h2export::datamodel::ScenarioConfig;
use h2export::pipeline::{run_scenario, PipelineInputs};
use h2export::solve::{ScenarioInputs, SolverStatus};
use h2export::Error;
use log::info;
use serde::{Deserialize, Serialize};

use crate::config::LoadedConfig;
use crate::run::{load_countries, CountryData};
use crate::pool::run_pool;
use crate::{write_atomic, CliError};

pub const SENSITIVITY_DIR: &str = "sensitivity";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CountrySensitivity {
    pub country_id: String,
    pub year: u16,
    pub export_fraction: f64,
    pub table: SensitivityTable,
}

fn cost_of(
    data: &CountryData,
    te: &h2export::datamodel::TechnoEconomics,
    scenario: &ScenarioConfig,
    solver: &h2export::solve::SolverOptions,
) -> h2export::Result<f64> {
    let inputs = PipelineInputs {
        scenario: ScenarioInputs {
            clusters: &data.cache.clusters,
            graph: &data.graph,
            te,
        },
        placements: &data.cache.placements,
    };
    let out = run_scenario(inputs, scenario, solver)?;
    match (out.summary.status, out.post) {
        (SolverStatus::Optimal, Some(post)) => Ok(post.cost.c_h2),
        (status, _) => Err(Error::Solver(format!("scenario ended {status:?}"))),
    }
}

/// Runs every country's sweep and writes `sensitivity/{country}.json`.
pub fn cmd_sensitivity(cfg: &LoadedConfig, jobs: usize) -> Result<Vec<PathBuf>, CliError> {
    let te = cfg.technoeconomics()?;
    let countries = load_countries(cfg, &te)?;
    let solver = cfg.config.solver;
    let settings = &cfg.config.sensitivity;

    // (country index, variant index or None for the reference, config)
    let mut work = Vec::new();
    for (ci, data) in countries.iter().enumerate() {
        let base = cfg.scenario(&data.input.country_id, settings.year, settings.export_fraction);
        let (reference, variants) = sensitivity_configs(&base);
        work.push((ci, None, reference));
        for (vi, (_, c)) in variants.into_iter().enumerate() {
            work.push((ci, Some(vi), c));
        }
    }
    let mut costs: Vec<Option<h2export::Result<f64>>> = (0..work.len()).map(|_| None).collect();
    run_pool(
        work.len(),
        jobs,
        |i| {
            let (ci, _, scenario) = &work[i];
            cost_of(&countries[*ci], &te, scenario, &solver)
        },
        |i, r| costs[i] = Some(r),
    );

    let dir = cfg.results_dir().join(SENSITIVITY_DIR);
    let mut written = Vec::new();
    let mut costs = costs.into_iter().map(|c| c.expect("every job reports"));
    for data in &countries {
        let base = cfg.scenario(&data.input.country_id, settings.year, settings.export_fraction);
        let (_, variants) = sensitivity_configs(&base);
        let reference = costs.next().expect("reference result");
        let results: Vec<_> = variants.into_iter().map(|(v, _)| (v, costs.next().expect("variant result"))).collect();
        let reference = reference.map_err(|e| {
            CliError::Other(anyhow::anyhow!("{}: sensitivity reference failed: {e}", data.input.country_id))
        })?;
        let doc = CountrySensitivity {
            country_id: data.input.country_id.clone(),
            year: settings.year.value(),
            export_fraction: settings.export_fraction,
            table: sensitivity_table(reference, results),
        };
        let path = dir.join(format!("{}.json", data.input.country_id));
        let mut bytes = serde_json::to_vec_pretty(&doc).map_err(anyhow::Error::from)?;
        bytes.push(b'\n');
        write_atomic(&path, &bytes)?;
        info!("{}: reference {:.4} EUR/kg", data.input.country_id, reference);
        written.push(path);
    }
    Ok(written)
}
