//! `cluster`: placements and capacity factors to a cluster cache per
//! country.

use std::collections::BTreeMap;

use h2export::network::read_regions;
use h2export::potentials::{read_placements, ClusterCache};

use crate::config::LoadedConfig;
use crate::CliError;

#[derive(Debug, Clone, PartialEq)]
pub struct GroupSummary {
    pub country_id: String,
    pub region: String,
    pub tech: String,
    pub clusters: usize,
    pub flh_min: f64,
    pub flh_max: f64,
    pub capacity_kw: f64,
}

impl std::fmt::Display for GroupSummary {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{} {} {}: {} clusters, FLH {:.0}-{:.0} h/yr, {:.0} kW",
            self.country_id, self.region, self.tech, self.clusters, self.flh_min, self.flh_max, self.capacity_kw
        )
    }
}

fn input_err(e: h2export::Error) -> CliError {
    CliError::Config(e.to_string())
}

/// Clusters every configured country and writes its cache.
pub fn cmd_cluster(cfg: &LoadedConfig) -> Result<Vec<GroupSummary>, CliError> {
    let mut out = Vec::new();
    for country in &cfg.config.countries {
        let placements = read_placements(&cfg.resolve(&country.placements), &cfg.resolve(&country.capacity_factors))
            .map_err(input_err)?;
        let regions = read_regions(&cfg.resolve(&country.regions)).map_err(input_err)?;
        if let Some(p) = placements.iter().find(|p| !regions.iter().any(|r| r.id == p.region)) {
            return Err(CliError::Config(format!(
                "placement {} lies in region {} which is missing from {}",
                p.id,
                p.region,
                country.regions.display()
            )));
        }
        let cache = ClusterCache::build(&placements).map_err(input_err)?;
        let path = cfg.cache_path(&country.country_id);
        crate::write_atomic(&path, cache.to_json()?.as_bytes())?;

        let mut groups: BTreeMap<(String, String), GroupSummary> = BTreeMap::new();
        for c in &cache.clusters {
            let annual = c.annual_flh(c.cf.len());
            let g = groups
                .entry((c.region.clone(), c.tech.to_string()))
                .or_insert_with(|| GroupSummary {
                    country_id: country.country_id.clone(),
                    region: c.region.clone(),
                    tech: c.tech.to_string(),
                    clusters: 0,
                    flh_min: f64::INFINITY,
                    flh_max: 0.0,
                    capacity_kw: 0.0,
                });
            g.clusters += 1;
            g.flh_min = g.flh_min.min(annual);
            g.flh_max = g.flh_max.max(annual);
            g.capacity_kw += c.capacity_bound;
        }
        out.extend(groups.into_values());
    }
    Ok(out)
}
