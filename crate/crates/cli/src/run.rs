//! `run`: the year × export-level sweep for every configured country.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::Context;
use h2export::datamodel::{ScenarioConfig, TechnoEconomics, Year};
use h2export::network::{build_graph, read_adjacency, read_regions, RegionGraph};
use h2export::pipeline::{run_scenario, PipelineInputs};
use h2export::potentials::ClusterCache;
use h2export::solve::{ScenarioInputs, SolverOptions, SolverStatus};
use log::{info, warn};
use serde::Serialize;

use crate::config::{CountryInput, LoadedConfig};
use crate::manifest::{RunManifest, ScenarioEntry, ScenarioStatus, MANIFEST_SCHEMA_VERSION};
use crate::outputs::{artifacts, Artifacts, SUMMARY_FILE};
use crate::pool::run_pool;
use crate::{file_digest, sha256_hex, write_atomic, CliError};

pub const SCENARIO_DIR: &str = "scenarios";
pub const ATTRIBUTES_FILE: &str = "attributes.csv";

/// Inputs of one country shared by all its scenarios.
pub struct CountryData {
    pub input: CountryInput,
    pub cache: ClusterCache,
    pub graph: RegionGraph,
    /// Digest over the cache and network files.
    pub digest: String,
}

pub fn load_country(cfg: &LoadedConfig, input: &CountryInput, te: &TechnoEconomics) -> Result<CountryData, CliError> {
    let cache_path = cfg.cache_path(&input.country_id);
    if !cache_path.exists() {
        return Err(CliError::Config(format!(
            "cluster cache {} is missing; run `h2export cluster` first",
            cache_path.display()
        )));
    }
    let cache = ClusterCache::read(&cache_path).map_err(|e| CliError::Config(e.to_string()))?;
    let regions_path = cfg.resolve(&input.regions);
    let adjacency_path = cfg.resolve(&input.adjacency);
    let regions = read_regions(&regions_path).map_err(|e| CliError::Config(e.to_string()))?;
    let adjacency = read_adjacency(&adjacency_path).map_err(|e| CliError::Config(e.to_string()))?;
    let graph = build_graph(&regions, &adjacency, &input.harbor, te.detour_factor)
        .map_err(|e| CliError::Config(format!("{}: {e}", input.country_id)))?;
    let parts = [file_digest(&cache_path)?, file_digest(&regions_path)?, file_digest(&adjacency_path)?];
    let digest = sha256_hex(format!("{}|{}", parts.join("|"), serde_json::to_string(&input.harbor).unwrap_or_default()).as_bytes());
    Ok(CountryData {
        input: input.clone(),
        cache,
        graph,
        digest,
    })
}

pub fn load_countries(cfg: &LoadedConfig, te: &TechnoEconomics) -> Result<Vec<CountryData>, CliError> {
    cfg.config.countries.iter().map(|c| load_country(cfg, c, te)).collect()
}

#[derive(Serialize)]
struct DigestInput<'a> {
    version: &'a str,
    scenario: &'a ScenarioConfig,
    te: &'a TechnoEconomics,
    solver: &'a SolverOptions,
    country: &'a str,
}

pub fn scenario_digest(
    scenario: &ScenarioConfig,
    te: &TechnoEconomics,
    solver: &SolverOptions,
    country_digest: &str,
) -> String {
    let doc = DigestInput {
        version: env!("CARGO_PKG_VERSION"),
        scenario,
        te,
        solver,
        country: country_digest,
    };
    sha256_hex(&serde_json::to_vec(&doc).expect("serializable digest input"))
}

/// A scenario ready to solve.
pub struct Job {
    pub key: String,
    pub country: usize,
    pub scenario: ScenarioConfig,
    pub digest: String,
}

pub fn scenario_key(country: &str, year: Year, level: usize) -> String {
    format!("{country}_{}_f{level:02}", year.value())
}

/// Outcome of a job as produced on a worker thread.
pub(crate) enum JobResult {
    Solved(Box<Artifacts>),
    Failed { status: ScenarioStatus, message: String },
}

pub(crate) fn execute(job: &Job, data: &CountryData, te: &TechnoEconomics, solver: &SolverOptions) -> JobResult {
    let inputs = PipelineInputs {
        scenario: ScenarioInputs {
            clusters: &data.cache.clusters,
            graph: &data.graph,
            te,
        },
        placements: &data.cache.placements,
    };
    match run_scenario(inputs, &job.scenario, solver) {
        Ok(out) => match artifacts(&job.key, &out) {
            Ok(a) => JobResult::Solved(Box::new(a)),
            Err(e) => JobResult::Failed {
                status: ScenarioStatus::Error,
                message: format!("{e:#}"),
            },
        },
        Err(h2export::Error::Infeasible { status, diagnostics }) => JobResult::Failed {
            status: ScenarioStatus::Infeasible,
            message: format!("{status}: {diagnostics}"),
        },
        Err(e) => JobResult::Failed {
            status: ScenarioStatus::Error,
            message: e.to_string(),
        },
    }
}

pub(crate) fn status_of(a: &Artifacts) -> ScenarioStatus {
    match a.record.summary.status {
        SolverStatus::Optimal => ScenarioStatus::Optimal,
        SolverStatus::Suboptimal => ScenarioStatus::SuboptimalDropped,
        SolverStatus::Infeasible => ScenarioStatus::Infeasible,
    }
}

pub(crate) fn write_artifacts(dir: &Path, a: &Artifacts) -> Result<(), CliError> {
    std::fs::create_dir_all(dir)?;
    for (name, bytes) in &a.files {
        write_atomic(&dir.join(name), bytes).with_context(|| format!("writing {}", dir.join(name).display()))?;
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunReport {
    pub results_dir: PathBuf,
    pub solved: usize,
    pub skipped: usize,
    pub failed: usize,
    pub manifest: RunManifest,
}

/// Input file digests keyed by configured path.
pub fn input_digests(cfg: &LoadedConfig) -> Result<BTreeMap<String, String>, CliError> {
    let mut out = BTreeMap::new();
    let mut add = |p: &Path| -> Result<(), CliError> {
        out.insert(p.display().to_string(), file_digest(&cfg.resolve(p))?);
        Ok(())
    };
    for c in &cfg.config.countries {
        add(&c.placements)?;
        add(&c.capacity_factors)?;
        add(&c.regions)?;
        add(&c.adjacency)?;
    }
    if let Some(p) = &cfg.config.technoeconomics {
        add(p)?;
    }
    if let Some(p) = &cfg.config.attributes {
        add(p)?;
    }
    Ok(out)
}

pub fn cmd_run(cfg: &LoadedConfig, jobs: usize) -> Result<RunReport, CliError> {
    let te = cfg.technoeconomics()?;
    let countries = load_countries(cfg, &te)?;
    let solver = cfg.config.solver;
    let results = cfg.results_dir();
    std::fs::create_dir_all(&results)?;

    let fractions = cfg.fractions();
    let mut all_jobs = Vec::new();
    for (ci, data) in countries.iter().enumerate() {
        for &year in &cfg.config.years {
            for (k, &f) in fractions.iter().enumerate() {
                let scenario = cfg.scenario(&data.input.country_id, year, f);
                if let Err(e) = scenario.check_series_len(data.cache.series_len) {
                    return Err(CliError::Config(format!("{}: {e}", data.input.country_id)));
                }
                let digest = scenario_digest(&scenario, &te, &solver, &data.digest);
                all_jobs.push(Job {
                    key: scenario_key(&data.input.country_id, year, k + 1),
                    country: ci,
                    scenario,
                    digest,
                });
            }
        }
    }

    let previous: BTreeMap<String, ScenarioEntry> = RunManifest::read(&results)?
        .map(|m| m.scenarios.into_iter().map(|e| (e.key.clone(), e)).collect())
        .unwrap_or_default();
    let config_hash = sha256_hex(&cfg.raw);
    let mut manifest = RunManifest {
        schema_version: MANIFEST_SCHEMA_VERSION,
        run_id: config_hash[..16].to_string(),
        config_hash,
        input_digests: input_digests(cfg)?,
        scenarios: Vec::new(),
    };

    let mut pending = Vec::new();
    for job in all_jobs {
        let done = previous.get(&job.key).filter(|e| {
            e.digest == job.digest
                && e.status.is_final()
                && (e.status != ScenarioStatus::Optimal || results.join(SCENARIO_DIR).join(&job.key).join(SUMMARY_FILE).exists())
        });
        match done {
            Some(e) => {
                info!("{}: unchanged, skipping", job.key);
                manifest.scenarios.push(e.clone());
            }
            None => pending.push(job),
        }
    }
    let skipped = manifest.scenarios.len();
    manifest.write(&results)?;

    let mut write_error: Option<CliError> = None;
    let mut solved = 0;
    run_pool(
        pending.len(),
        jobs,
        |i| {
            let t0 = Instant::now();
            let r = execute(&pending[i], &countries[pending[i].country], &te, &solver);
            (r, t0.elapsed())
        },
        |i, (r, elapsed)| {
            let job = &pending[i];
            let (status, message) = match r {
                JobResult::Solved(a) => {
                    let dir = results.join(SCENARIO_DIR).join(&job.key);
                    if let Err(e) = write_artifacts(&dir, &a) {
                        write_error.get_or_insert(e);
                    }
                    solved += 1;
                    if !a.record.verification.passed {
                        warn!("{}: solution failed verification", job.key);
                    }
                    (status_of(&a), None)
                }
                JobResult::Failed { status, message } => {
                    warn!("{}: {message}", job.key);
                    (status, Some(message))
                }
            };
            info!("{}: {status:?} in {:.2} s", job.key, elapsed.as_secs_f64());
            manifest.scenarios.push(ScenarioEntry {
                key: job.key.clone(),
                country_id: job.scenario.country_id.clone(),
                year: job.scenario.year.value(),
                export_fraction: job.scenario.export_fraction,
                digest: job.digest.clone(),
                status,
                message,
                elapsed_ms: elapsed.as_millis() as u64,
            });
            if let Err(e) = manifest.write(&results) {
                write_error.get_or_insert(e);
            }
        },
    );
    if let Some(e) = write_error {
        return Err(e);
    }

    if let Some(p) = &cfg.config.attributes {
        let bytes = std::fs::read(cfg.resolve(p)).map_err(|e| CliError::Config(format!("{}: {e}", p.display())))?;
        write_atomic(&results.join(ATTRIBUTES_FILE), &bytes)?;
    }
    crate::report::write_curves_csv(&results, &manifest, &results.join("curves.csv"))?;

    let failed = manifest.scenarios.iter().filter(|e| e.status != ScenarioStatus::Optimal).count();
    let report = RunReport {
        results_dir: results,
        solved,
        skipped,
        failed,
        manifest,
    };
    if report.failed == report.manifest.scenarios.len() {
        return Err(CliError::AllFailed(format!("{} scenarios, none optimal", report.failed)));
    }
    Ok(report)
}
