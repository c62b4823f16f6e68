//! CSV ingestion of placements and their capacity-factor series.
//!
//! Placements file header: `id,tech,region,lat,lon,capacity_kw`.
//! Capacity-factor file: one column per placement id (an optional leading
//! `hour` column is ignored), one row per hour.

use std::collections::{BTreeMap, HashSet};
use std::path::Path;

use serde::Deserialize;

use super::{Placement, Resource};
use crate::error::{Error, Result};
use crate::geo::GeoPoint;

#[derive(Debug, Clone, PartialEq, Deserialize)]
pub struct PlacementRow {
    pub id: String,
    pub tech: String,
    pub region: String,
    pub lat: f64,
    pub lon: f64,
    pub capacity_kw: f64,
}

fn parse_err(path: &Path, line: u64, message: impl Into<String>) -> Error {
    Error::Parse {
        path: path.to_path_buf(),
        line,
        message: message.into(),
    }
}

fn csv_err(path: &Path, e: csv::Error) -> Error {
    let line = e.position().map(|p| p.line()).unwrap_or(0);
    parse_err(path, line, e.to_string())
}

pub fn read_placements_meta(path: &Path) -> Result<Vec<PlacementRow>> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| csv_err(path, e))?;
    let mut rows = Vec::new();
    let mut seen = HashSet::new();
    for rec in rdr.deserialize::<PlacementRow>() {
        let row = rec.map_err(|e| csv_err(path, e))?;
        let line = rows.len() as u64 + 2;
        row.tech
            .parse::<Resource>()
            .map_err(|e| parse_err(path, line, e.to_string()))?;
        GeoPoint::new(row.lat, row.lon).map_err(|e| parse_err(path, line, e.to_string()))?;
        if !(row.capacity_kw > 0.0) {
            return Err(parse_err(path, line, format!("capacity_kw must be positive for {}", row.id)));
        }
        if !seen.insert(row.id.clone()) {
            return Err(parse_err(path, line, format!("duplicate placement id {}", row.id)));
        }
        rows.push(row);
    }
    Ok(rows)
}

/// Reads the capacity-factor table and returns one series per requested id.
pub fn read_capacity_factors(path: &Path, ids: &[String]) -> Result<BTreeMap<String, Vec<f64>>> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| csv_err(path, e))?;
    let headers = rdr.headers().map_err(|e| csv_err(path, e))?.clone();
    let mut columns = Vec::with_capacity(ids.len());
    for id in ids {
        let col = headers
            .iter()
            .position(|h| h == id)
            .ok_or_else(|| parse_err(path, 1, format!("no capacity-factor column for placement {id}")))?;
        columns.push(col);
    }
    let mut series: Vec<Vec<f64>> = vec![Vec::new(); ids.len()];
    for rec in rdr.records() {
        let rec = rec.map_err(|e| csv_err(path, e))?;
        let line = rec.position().map(|p| p.line()).unwrap_or(0);
        for (k, &col) in columns.iter().enumerate() {
            let raw = rec.get(col).unwrap_or("");
            let v: f64 = raw
                .parse()
                .map_err(|_| parse_err(path, line, format!("column {}: `{raw}` is not a number", ids[k])))?;
            if !(0.0..=1.0).contains(&v) {
                return Err(parse_err(
                    path,
                    line,
                    format!("column {}: capacity factor {v} outside [0, 1]", ids[k]),
                ));
            }
            series[k].push(v);
        }
    }
    if series.first().is_some_and(|s| s.is_empty()) {
        return Err(parse_err(path, 2, "capacity-factor table has no rows"));
    }
    Ok(ids.iter().cloned().zip(series).collect())
}

pub fn read_placements(meta_path: &Path, cf_path: &Path) -> Result<Vec<Placement>> {
    let rows = read_placements_meta(meta_path)?;
    let ids: Vec<String> = rows.iter().map(|r| r.id.clone()).collect();
    let mut cf = read_capacity_factors(cf_path, &ids)?;
    rows.into_iter()
        .map(|r| {
            let series = cf.remove(&r.id).unwrap_or_default();
            Ok(Placement {
                tech: r.tech.parse()?,
                location: GeoPoint::new(r.lat, r.lon)?,
                id: r.id,
                region: r.region,
                capacity_kw: r.capacity_kw,
                cf: series,
            })
        })
        .collect()
}
