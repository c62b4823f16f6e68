//! Regions file `region_id,lat,lon`; adjacency file `region_a,region_b`.

use std::path::Path;

use serde::Deserialize;

use super::Region;
use crate::error::{Error, Result};
use crate::geo::GeoPoint;

#[derive(Deserialize)]
struct RegionRow {
    region_id: String,
    lat: f64,
    lon: f64,
}

#[derive(Deserialize)]
struct AdjacencyRow {
    region_a: String,
    region_b: String,
}

fn csv_err(path: &Path, e: csv::Error) -> Error {
    Error::Parse {
        path: path.to_path_buf(),
        line: e.position().map(|p| p.line()).unwrap_or(0),
        message: e.to_string(),
    }
}

pub fn read_regions(path: &Path) -> Result<Vec<Region>> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| csv_err(path, e))?;
    let mut out = Vec::new();
    for (i, rec) in rdr.deserialize::<RegionRow>().enumerate() {
        let row = rec.map_err(|e| csv_err(path, e))?;
        let centroid = GeoPoint::new(row.lat, row.lon).map_err(|e| Error::Parse {
            path: path.to_path_buf(),
            line: i as u64 + 2,
            message: e.to_string(),
        })?;
        out.push(Region {
            id: row.region_id,
            centroid,
        });
    }
    Ok(out)
}

pub fn read_adjacency(path: &Path) -> Result<Vec<(String, String)>> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| csv_err(path, e))?;
    rdr.deserialize::<AdjacencyRow>()
        .map(|rec| {
            rec.map(|r| (r.region_a, r.region_b))
                .map_err(|e| csv_err(path, e))
        })
        .collect()
}
