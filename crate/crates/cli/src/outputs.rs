//! Per-scenario artifacts, serialised on worker threads and written by the
//! orchestrator.

use std::io::Write;

use anyhow::Context;
use flate2::write::GzEncoder;
use flate2::{Compression, GzBuilder};
use h2export::esm::{SystemModel, VarKey};
use h2export::pipeline::{ScenarioOutcome, ScenarioSummary};
use h2export::postproc::{write_edges_csv, write_parks_csv, ExportCostResult};
use h2export::solve::Solution;
use serde::{Deserialize, Serialize};

pub const RECORD_SCHEMA_VERSION: u32 = 1;
pub const SUMMARY_FILE: &str = "summary.json";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationDigest {
    pub passed: bool,
    pub max_relative_residual: f64,
    pub objective_mismatch: f64,
    pub storage_cycle_residual: f64,
}

/// Everything the report needs from one scenario.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioRecord {
    pub schema_version: u32,
    pub key: String,
    pub summary: ScenarioSummary,
    pub cost: Option<ExportCostResult>,
    pub verification: VerificationDigest,
}

pub(crate) struct Artifacts {
    pub record: ScenarioRecord,
    pub files: Vec<(&'static str, Vec<u8>)>,
}

fn location(model: &SystemModel, key: VarKey) -> String {
    let arc = |a: usize| {
        let (x, y, _) = model.arcs[a];
        format!("{}--{}", model.node_ids[x], model.node_ids[y])
    };
    match key {
        VarKey::ResCapacity(c) => model.clusters[c].cluster_id.clone(),
        VarKey::PemCapacity(n) | VarKey::BatteryCapacity(n) => model.node_ids[n].clone(),
        VarKey::LiquefierCapacity | VarKey::TankCapacity => model.node_ids[model.harbor].clone(),
        VarKey::ElecArcCapacity(a) | VarKey::PipeArcCapacity(a) => arc(a),
        _ => String::new(),
    }
}

fn capacities_csv(model: &SystemModel, solution: &Solution) -> anyhow::Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["variable", "technology", "location", "unit", "value"])?;
    for (col, &v) in model.lp.columns.iter().zip(&solution.values) {
        if !col.key.is_capacity() {
            continue;
        }
        let unit = match col.key {
            VarKey::TankCapacity | VarKey::BatteryCapacity(_) => "kWh",
            _ => "kW",
        };
        w.write_record([
            col.key.to_string(),
            col.tech.map(|t| t.to_string()).unwrap_or_default(),
            location(model, col.key),
            unit.to_string(),
            v.to_string(),
        ])?;
    }
    Ok(w.into_inner()?)
}

/// Hour-by-hour operation values, one column per operation variable
/// family, gzip-compressed without a timestamp.
fn operations_gz(model: &SystemModel, solution: &Solution) -> anyhow::Result<Vec<u8>> {
    let mut names: Vec<String> = Vec::new();
    let mut table: Vec<Vec<f64>> = Vec::new();
    let mut slot = std::collections::HashMap::new();
    for (col, &v) in model.lp.columns.iter().zip(&solution.values) {
        let Some(t) = col.key.hour() else { continue };
        let full = col.key.to_string();
        let name = full.strip_suffix(&format!("_t{t}")).unwrap_or(&full).to_string();
        let idx = *slot.entry(name.clone()).or_insert_with(|| {
            names.push(name);
            table.push(vec![0.0; model.hours]);
            table.len() - 1
        });
        table[idx][t] = v;
    }
    let enc: GzEncoder<Vec<u8>> = GzBuilder::new().mtime(0).write(Vec::new(), Compression::default());
    let mut w = csv::Writer::from_writer(enc);
    let mut header = vec!["hour".to_string()];
    header.extend(names.iter().cloned());
    w.write_record(&header)?;
    for t in 0..model.hours {
        let mut row = vec![t.to_string()];
        row.extend(table.iter().map(|c| c[t].to_string()));
        w.write_record(&row)?;
    }
    let mut enc = w.into_inner().map_err(|e| anyhow::anyhow!("{e}"))?;
    enc.flush()?;
    Ok(enc.finish()?)
}

pub(crate) fn artifacts(key: &str, out: &ScenarioOutcome) -> anyhow::Result<Artifacts> {
    let record = ScenarioRecord {
        schema_version: RECORD_SCHEMA_VERSION,
        key: key.to_string(),
        summary: out.summary.clone(),
        cost: out.post.as_ref().map(|p| p.cost.clone()),
        verification: VerificationDigest {
            passed: out.verification.passed,
            max_relative_residual: out.verification.max_relative_residual,
            objective_mismatch: out.verification.objective_mismatch,
            storage_cycle_residual: out.verification.storage_cycle_residual,
        },
    };
    let mut summary = serde_json::to_vec_pretty(&record)?;
    summary.push(b'\n');
    let mut files = vec![
        (SUMMARY_FILE, summary),
        ("capacities.csv", capacities_csv(&out.solved.model, &out.solved.solution)?),
        ("operations.csv.gz", operations_gz(&out.solved.model, &out.solved.solution)?),
    ];
    if let Some(post) = &out.post {
        let mut parks = Vec::new();
        write_parks_csv(&post.parks, &mut parks).context("parks")?;
        let mut edges = Vec::new();
        write_edges_csv(&post.grids, &mut edges).context("grid edges")?;
        let mut alloc = csv::Writer::from_writer(Vec::new());
        alloc.write_record(["cluster_id", "placement_id", "used_kw"])?;
        for a in &post.allocations {
            alloc.write_record([a.cluster_id.clone(), a.placement_id.clone(), a.used_kw.to_string()])?;
        }
        files.push(("parks.csv", parks));
        files.push(("grid_edges.csv", edges));
        files.push(("allocations.csv", alloc.into_inner()?));
    }
    Ok(Artifacts { record, files })
}
