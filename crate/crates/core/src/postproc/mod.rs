//! Post-optimisation: placements, parks, local grids and the final
//! hydrogen cost.

mod allocate;
mod cost;
mod mst;
mod parks;

pub use allocate::allocate_placements;
pub use cost::{
    classify_group, cost_per_kg, export_cost, res_energy, CostBreakdown, CountryGroup, ExportCostResult,
    GROUP_I_MAX_COST, SMALL_EXPORTER_KWH,
};
pub use mst::{minimum_spanning_tree, mst_connect, tree_total, SpanningTree};
pub use parks::{cluster_parks, Park, PARK_RADIUS_KM};

use std::collections::{BTreeMap, HashMap};
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::datamodel::{TechnoEconomics, Technology, Year};
use crate::error::{Error, Result};
use crate::esm::SystemModel;
use crate::geo::GeoPoint;
use crate::network::RegionGraph;
use crate::potentials::{ClusterPotential, PlacementInfo};
use crate::solve::Solution;

/// Local grid of one region: parks joined to the region centroid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LocalGrid {
    pub region: String,
    pub target: GeoPoint<f64>,
    pub edges: Vec<(GeoPoint<f64>, GeoPoint<f64>)>,
    pub length_km: f64,
    /// EUR/yr.
    pub annual_cost: f64,
}

/// Allocation of a cluster's optimised capacity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Allocation {
    pub cluster_id: String,
    pub placement_id: String,
    pub used_kw: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PostprocResult {
    pub cost: ExportCostResult,
    pub allocations: Vec<Allocation>,
    pub parks: Vec<Park>,
    pub grids: Vec<LocalGrid>,
}

/// Annual cost of `length_km` of local grid, EUR/yr.
pub fn local_grid_annual_cost(length_km: f64, te: &TechnoEconomics, year: Year) -> Result<f64> {
    te.annualize(Technology::LocalGrid, length_km * te.unit_capex(Technology::LocalGrid, year))
}

/// Allocates each cluster's capacity to its placements, groups them into
/// parks, connects every region's parks by a spanning tree and prices the
/// exported hydrogen. `clusters` must be in model order; `te` should already
/// carry scenario overrides.
pub fn postprocess(
    model: &SystemModel,
    solution: &Solution,
    clusters: &[ClusterPotential],
    placements: &[PlacementInfo],
    graph: &RegionGraph,
    te: &TechnoEconomics,
) -> Result<PostprocResult> {
    if clusters.len() != model.clusters.len() {
        return Err(Error::Model("cluster list does not match the model".into()));
    }
    let index: HashMap<&str, &PlacementInfo> = placements.iter().map(|p| (p.id.as_str(), p)).collect();

    let mut allocations = Vec::new();
    let mut by_group: BTreeMap<(String, String), Vec<(&PlacementInfo, f64)>> = BTreeMap::new();
    for (k, c) in clusters.iter().enumerate() {
        let members: Vec<&PlacementInfo> = c
            .member_ids
            .iter()
            .map(|id| {
                index
                    .get(id.as_str())
                    .copied()
                    .ok_or_else(|| Error::input(format!("placement {id} of cluster {} not found", c.cluster_id)))
            })
            .collect::<Result<_>>()?;
        let bound: f64 = members.iter().map(|p| p.capacity_kw).sum();
        let used = solution.value(model.layout.res_cap[k]).clamp(0.0, bound);
        for (p, u) in allocate_placements(used, &members)? {
            allocations.push(Allocation {
                cluster_id: c.cluster_id.clone(),
                placement_id: p.id.clone(),
                used_kw: u,
            });
            by_group.entry((p.region.clone(), p.tech.to_string())).or_default().push((p, u));
        }
    }

    let mut parks = Vec::new();
    for items in by_group.values() {
        parks.extend(cluster_parks(items));
    }

    let mut per_region: BTreeMap<&str, Vec<GeoPoint<f64>>> = BTreeMap::new();
    for p in &parks {
        per_region.entry(p.region.as_str()).or_default().push(p.centroid);
    }
    let mut grids = Vec::new();
    for (region, centroids) in per_region {
        let node = graph
            .node_index(region)
            .ok_or_else(|| Error::Model(format!("region {region} is not in the graph")))?;
        let target = graph.nodes()[node].location;
        let tree = mst_connect(target, &centroids);
        let pts: Vec<GeoPoint<f64>> = std::iter::once(target).chain(centroids.iter().copied()).collect();
        grids.push(LocalGrid {
            region: region.to_string(),
            target,
            edges: tree.edges.iter().map(|&(a, b)| (pts[a], pts[b])).collect(),
            length_km: tree.total,
            annual_cost: local_grid_annual_cost(tree.total, te, model.year)?,
        });
    }
    let local: f64 = grids.iter().map(|g| g.annual_cost).sum();

    let exported_kg = model.demand.annual_kwh() / te.lhv_h2;
    let cost = export_cost(model, solution, local, exported_kg)?;
    Ok(PostprocResult {
        cost,
        allocations,
        parks,
        grids,
    })
}

/// Writes park centroids as `park_id,lat,lon`.
pub fn write_parks_csv<W: Write>(parks: &[Park], w: W) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["park_id", "lat", "lon"]).map_err(csv_err)?;
    for p in parks {
        out.write_record([p.park_id.clone(), p.centroid.lat.to_string(), p.centroid.lon.to_string()])
            .map_err(csv_err)?;
    }
    out.flush().map_err(|e| Error::io("parks csv", e))
}

/// Writes local grid edges as `edge,lat1,lon1,lat2,lon2`.
pub fn write_edges_csv<W: Write>(grids: &[LocalGrid], w: W) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["edge", "lat1", "lon1", "lat2", "lon2"]).map_err(csv_err)?;
    for g in grids {
        for (i, (a, b)) in g.edges.iter().enumerate() {
            out.write_record([
                format!("{}-e{i:03}", g.region),
                a.lat.to_string(),
                a.lon.to_string(),
                b.lat.to_string(),
                b.lon.to_string(),
            ])
            .map_err(csv_err)?;
        }
    }
    out.flush().map_err(|e| Error::io("edges csv", e))
}

fn csv_err(e: csv::Error) -> Error {
    Error::input(format!("csv write failed: {e}"))
}
