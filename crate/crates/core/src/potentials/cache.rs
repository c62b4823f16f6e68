//! Clustered potentials persisted between the `cluster` and `run` steps.
//!
//! The cache is a single JSON document:
//! `{"schema_version", "series_len", "placements": [...], "clusters": [...]}`.
//! Placements keep their metadata and full load hours (not their series);
//! clusters keep their aggregated series. Serialization is deterministic.

use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{cluster_all, ClusterPotential, Placement, Resource};
use crate::error::{Error, Result};
use crate::geo::GeoPoint;

pub const CACHE_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlacementInfo {
    pub id: String,
    pub tech: Resource,
    pub region: String,
    pub lat: f64,
    pub lon: f64,
    pub capacity_kw: f64,
    pub flh: f64,
}

impl PlacementInfo {
    pub fn location(&self) -> GeoPoint<f64> {
        GeoPoint {
            lat: self.lat,
            lon: self.lon,
        }
    }
}

impl From<&Placement> for PlacementInfo {
    fn from(p: &Placement) -> Self {
        PlacementInfo {
            id: p.id.clone(),
            tech: p.tech,
            region: p.region.clone(),
            lat: p.location.lat,
            lon: p.location.lon,
            capacity_kw: p.capacity_kw,
            flh: p.flh(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusterCache {
    pub schema_version: u32,
    pub series_len: usize,
    pub placements: Vec<PlacementInfo>,
    pub clusters: Vec<ClusterPotential>,
}

impl ClusterCache {
    pub fn build(placements: &[Placement]) -> Result<Self> {
        let series_len = placements.first().map_or(0, |p| p.cf.len());
        if let Some(p) = placements.iter().find(|p| p.cf.len() != series_len) {
            return Err(Error::input(format!(
                "placement {} has {} hours, expected {series_len}",
                p.id,
                p.cf.len()
            )));
        }
        let mut infos: Vec<PlacementInfo> = placements.iter().map(PlacementInfo::from).collect();
        infos.sort_by(|a, b| a.id.cmp(&b.id));
        Ok(ClusterCache {
            schema_version: CACHE_SCHEMA_VERSION,
            series_len,
            placements: infos,
            clusters: cluster_all(placements)?,
        })
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let cache: ClusterCache = serde_json::from_str(s)?;
        if cache.schema_version != CACHE_SCHEMA_VERSION {
            return Err(Error::input(format!(
                "unsupported cluster cache schema {}",
                cache.schema_version
            )));
        }
        Ok(cache)
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json()?).map_err(|e| Error::io(path, e))
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json(&text)
    }

    pub fn placement(&self, id: &str) -> Option<&PlacementInfo> {
        self.placements
            .binary_search_by(|p| p.id.as_str().cmp(id))
            .ok()
            .map(|i| &self.placements[i])
    }
}
