//! `report`: turns a results directory into curve, decomposition, group,
//! sensitivity, pooled-supply, water and geometry tables. Output depends
//! only on the results directory, never on timing or thread count.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use anyhow::Context;
use h2export::curves::{
    build_curve, cumulative_by_attribute, water_demand, AttributeKey, CostPotentialCurve, CountryAttributes,
    CumulativeCurves, ScenarioPoint,
};
use h2export::datamodel::Year;
use h2export::postproc::{classify_group, CostBreakdown};
use log::warn;
use serde::Serialize;

use crate::manifest::{RunManifest, ScenarioStatus, MANIFEST_FILE};
use crate::outputs::SUMMARY_FILE;
use crate::run::{ATTRIBUTES_FILE, SCENARIO_DIR};
use crate::sensitivity::{CountrySensitivity, SENSITIVITY_DIR};
use crate::{sha256_hex, write_atomic, CliError, ScenarioRecord};

pub const REPORT_SCHEMA_VERSION: u32 = 1;
pub const META_FILE: &str = "report_meta.json";

type Files = BTreeMap<String, Vec<u8>>;

fn csv_bytes(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> anyhow::Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for r in rows {
        w.write_record(&r)?;
    }
    Ok(w.into_inner()?)
}

fn read_record(results: &Path, key: &str) -> Result<ScenarioRecord, CliError> {
    let path = results.join(SCENARIO_DIR).join(key).join(SUMMARY_FILE);
    let text = std::fs::read_to_string(&path).with_context(|| format!("reading {}", path.display()))?;
    Ok(serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?)
}

/// Optimal scenario records of a manifest, in key order.
fn optimal_records(results: &Path, manifest: &RunManifest) -> Result<Vec<ScenarioRecord>, CliError> {
    let mut entries: Vec<_> = manifest.scenarios.iter().filter(|e| e.status == ScenarioStatus::Optimal).collect();
    entries.sort_by(|a, b| a.key.cmp(&b.key));
    entries.iter().map(|e| read_record(results, &e.key)).collect()
}

/// Curves per country and year, plus the labels each curve left out.
fn assemble_curves(records: &[ScenarioRecord]) -> Result<Vec<(CostPotentialCurve, Vec<String>)>, CliError> {
    let mut groups: BTreeMap<(String, u16), Vec<&ScenarioRecord>> = BTreeMap::new();
    for r in records {
        groups
            .entry((r.summary.country_id.clone(), r.summary.year))
            .or_default()
            .push(r);
    }
    let mut out = Vec::new();
    for ((country, year), recs) in groups {
        let year = Year::try_from(year)?;
        let max_export = recs.iter().map(|r| r.summary.max_export_kwh).fold(0.0, f64::max);
        let points: Vec<ScenarioPoint> = recs
            .iter()
            .map(|r| ScenarioPoint {
                label: r.key.clone(),
                export_kwh: r.summary.export_kwh,
                status: r.summary.status,
                cost: r.cost.clone(),
            })
            .collect();
        out.push(build_curve(&country, year, max_export, &points)?);
    }
    Ok(out)
}

fn num(x: f64) -> String {
    x.to_string()
}

/// `curves.csv` of a results directory: one row per curve point.
fn curves_table(curves: &[(CostPotentialCurve, Vec<String>)]) -> anyhow::Result<Vec<u8>> {
    let mut header = vec!["country", "year", "export_kwh", "cost_eur_per_kg"];
    header.extend(CostBreakdown::<f64>::COLUMNS);
    header.push("curtailment");
    let rows = curves.iter().flat_map(|(c, _)| {
        c.points.iter().map(move |p| {
            let mut row = vec![c.country_id.clone(), c.year.to_string(), num(p.export_kwh), num(p.c_h2)];
            row.extend(p.result.decomposition.as_array().map(num));
            row.push(num(p.result.curtailment));
            row
        })
    });
    csv_bytes(&header, rows)
}

/// Writes `curves.csv` from the optimal scenarios recorded in `manifest`.
pub fn write_curves_csv(results: &Path, manifest: &RunManifest, path: &Path) -> Result<(), CliError> {
    let records = optimal_records(results, manifest)?;
    if records.is_empty() {
        return Ok(());
    }
    let curves = assemble_curves(&records)?;
    write_atomic(path, &curves_table(&curves)?)?;
    Ok(())
}

pub fn read_attributes(path: &Path) -> Result<Vec<CountryAttributes>, CliError> {
    let mut rdr = csv::Reader::from_path(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    let mut out = Vec::new();
    for row in rdr.records() {
        let row = row.map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        let field = |i: usize| row.get(i).map(str::trim).filter(|s| !s.is_empty());
        let Some(country_id) = field(0) else { continue };
        let bad = |e: h2export::Error| CliError::Config(format!("{}: {e}", path.display()));
        out.push(CountryAttributes {
            country_id: country_id.to_string(),
            regime: field(1).map(str::parse).transpose().map_err(bad)?,
            water_stress: field(2).map(str::parse).transpose().map_err(bad)?,
        });
    }
    Ok(out)
}

fn cumulative_table(c: &CumulativeCurves) -> anyhow::Result<Vec<u8>> {
    let steps = c
        .classes
        .iter()
        .map(|(k, v)| (k.as_str(), v))
        .chain(std::iter::once(("all", &c.merged)));
    let rows = steps.flat_map(|(class, v)| {
        v.iter().map(move |s| {
            vec![
                class.to_string(),
                s.country_id.clone(),
                s.quantity_kwh.to_string(),
                s.cumulative_kwh.to_string(),
                num(s.cost),
            ]
        })
    });
    csv_bytes(&["class", "country", "quantity_kwh", "cumulative_kwh", "cost_eur_per_kg"], rows)
}

#[derive(Serialize)]
struct PlotCurve<'a> {
    country: &'a str,
    year: u16,
    /// `[export_kwh, eur_per_kg]` pairs.
    points: Vec<[f64; 2]>,
}

#[derive(Serialize)]
struct FileDigest {
    name: String,
    sha256: String,
}

#[derive(Serialize)]
struct ReportMeta {
    schema_version: u32,
    run_id: String,
    config_hash: String,
    files: Vec<FileDigest>,
}

fn expected_layout(results: &Path) -> String {
    format!(
        "{} does not look like a results directory; expected {MANIFEST_FILE}, {SCENARIO_DIR}/<key>/{SUMMARY_FILE} \
         and optionally {ATTRIBUTES_FILE} and {SENSITIVITY_DIR}/<country>.json",
        results.display()
    )
}

fn build_files(results: &Path, manifest: &RunManifest) -> Result<Files, CliError> {
    let mut files = Files::new();
    let records = optimal_records(results, manifest)?;
    let curves = if records.is_empty() {
        warn!("no optimal scenarios in {}", results.display());
        Vec::new()
    } else {
        assemble_curves(&records)?
    };

    files.insert("curves.csv".into(), curves_table(&curves)?);

    let mut header = vec!["country", "year", "export_kwh"];
    header.extend(CostBreakdown::<f64>::COLUMNS);
    header.extend(["component_sum", "cost_eur_per_kg"]);
    let rows = curves.iter().flat_map(|(c, _)| {
        c.points.iter().map(move |p| {
            let d = &p.result.decomposition;
            let mut row = vec![c.country_id.clone(), c.year.to_string(), num(p.export_kwh)];
            row.extend(d.as_array().map(num));
            row.push(num(d.sum()));
            row.push(num(p.c_h2));
            row
        })
    });
    files.insert("decomposition.csv".into(), csv_bytes(&header, rows)?);

    let mut group_rows = Vec::new();
    let mut water_rows = Vec::new();
    for (c, _) in &curves {
        let group = classify_group(c)?;
        let costs = c.points.iter().map(|p| p.c_h2);
        group_rows.push(vec![
            c.country_id.clone(),
            c.year.to_string(),
            format!("{group:?}"),
            num(c.max_export),
            num(costs.clone().fold(f64::INFINITY, f64::min)),
            num(costs.fold(f64::NEG_INFINITY, f64::max)),
        ]);
        for p in &c.points {
            water_rows.push(vec![
                c.country_id.clone(),
                c.year.to_string(),
                num(p.export_kwh),
                num(p.result.exported_mass),
                num(water_demand(p.result.exported_mass)?),
            ]);
        }
    }
    files.insert(
        "groups.csv".into(),
        csv_bytes(
            &["country", "year", "group", "max_export_kwh", "min_cost_eur_per_kg", "max_cost_eur_per_kg"],
            group_rows,
        )?,
    );
    files.insert(
        "water.csv".into(),
        csv_bytes(&["country", "year", "export_kwh", "exported_kg", "water_l"], water_rows)?,
    );

    let mut excluded: Vec<Vec<String>> = manifest
        .scenarios
        .iter()
        .filter(|e| e.status != ScenarioStatus::Optimal)
        .map(|e| {
            vec![
                e.key.clone(),
                serde_json::to_value(e.status).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default(),
                e.message.clone().unwrap_or_default(),
            ]
        })
        .collect();
    excluded.sort();
    files.insert("excluded.csv".into(), csv_bytes(&["scenario", "status", "message"], excluded)?);

    let attributes_path = results.join(ATTRIBUTES_FILE);
    if attributes_path.exists() && !curves.is_empty() {
        let attributes = read_attributes(&attributes_path)?;
        let mut by_year: BTreeMap<Year, Vec<CostPotentialCurve>> = BTreeMap::new();
        for (c, _) in &curves {
            by_year.entry(c.year).or_default().push(c.clone());
        }
        for (year, cs) in &by_year {
            for (key, name) in [(AttributeKey::Regime, "regime"), (AttributeKey::WaterStress, "water_stress")] {
                let pooled = cumulative_by_attribute(cs, &attributes, key)?;
                files.insert(format!("cumulative_{name}_{year}.csv"), cumulative_table(&pooled)?);
            }
        }
    }

    let sens_dir = results.join(SENSITIVITY_DIR);
    if sens_dir.is_dir() {
        let mut paths: Vec<PathBuf> = std::fs::read_dir(&sens_dir)?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|x| x == "json"))
            .collect();
        paths.sort();
        let mut rows = Vec::new();
        let mut impact = Vec::new();
        for p in paths {
            let text = std::fs::read_to_string(&p).with_context(|| format!("reading {}", p.display()))?;
            let s: CountrySensitivity =
                serde_json::from_str(&text).with_context(|| format!("parsing {}", p.display()))?;
            rows.push(vec![
                s.country_id.clone(),
                "reference".into(),
                "reference".into(),
                num(s.table.reference_cost),
                num(0.0),
                String::new(),
            ]);
            for r in &s.table.rows {
                rows.push(vec![
                    s.country_id.clone(),
                    r.variant.group.clone(),
                    r.variant.name.clone(),
                    r.cost.map(num).unwrap_or_default(),
                    r.relative_change.map(num).unwrap_or_default(),
                    r.error.clone().unwrap_or_default(),
                ]);
            }
            for (g, v) in &s.table.impact {
                impact.push(vec![s.country_id.clone(), g.clone(), v.map(num).unwrap_or_default()]);
            }
        }
        files.insert(
            "sensitivity.csv".into(),
            csv_bytes(&["country", "group", "variant", "cost_eur_per_kg", "relative_change", "error"], rows)?,
        );
        files.insert(
            "sensitivity_impact.csv".into(),
            csv_bytes(&["country", "group", "mean_abs_relative_change"], impact)?,
        );
    }

    for r in &records {
        let dir = results.join(SCENARIO_DIR).join(&r.key);
        for (src, suffix) in [("parks.csv", "parks"), ("grid_edges.csv", "edges")] {
            let p = dir.join(src);
            if p.exists() {
                files.insert(format!("geometry/{}_{suffix}.csv", r.key), std::fs::read(&p)?);
            }
        }
    }

    let plot: Vec<PlotCurve> = curves
        .iter()
        .map(|(c, _)| PlotCurve {
            country: &c.country_id,
            year: c.year.value(),
            points: c.points.iter().map(|p| [p.export_kwh, p.c_h2]).collect(),
        })
        .collect();
    let mut plot = serde_json::to_vec_pretty(&plot).map_err(anyhow::Error::from)?;
    plot.push(b'\n');
    files.insert("plot.json".into(), plot);
    Ok(files)
}

/// Builds the report bundle of `results` into `out` and returns the names
/// of the files written, including the metadata file.
pub fn cmd_report(results: &Path, out: &Path) -> Result<Vec<String>, CliError> {
    let manifest = RunManifest::read(results)
        .map_err(|e| CliError::Config(format!("{e}; {}", expected_layout(results))))?
        .ok_or_else(|| CliError::Config(expected_layout(results)))?;
    let files = build_files(results, &manifest)?;
    for (name, bytes) in &files {
        write_atomic(&out.join(name), bytes)?;
    }
    let meta = ReportMeta {
        schema_version: REPORT_SCHEMA_VERSION,
        run_id: manifest.run_id.clone(),
        config_hash: manifest.config_hash.clone(),
        files: files
            .iter()
            .map(|(name, bytes)| FileDigest {
                name: name.clone(),
                sha256: sha256_hex(bytes),
            })
            .collect(),
    };
    let mut bytes = serde_json::to_vec_pretty(&meta).map_err(anyhow::Error::from)?;
    bytes.push(b'\n');
    write_atomic(&out.join(META_FILE), &bytes)?;
    let mut names: Vec<String> = files.into_keys().collect();
    names.push(META_FILE.into());
    Ok(names)
}
