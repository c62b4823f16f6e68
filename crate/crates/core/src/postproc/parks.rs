//! Single-linkage grouping of allocated placements into parks.

use serde::{Deserialize, Serialize};

use crate::geo::{km_to_lat_deg, weighted_centroid, GeoPoint};
use crate::potentials::{PlacementInfo, Resource};

/// Placements closer than this are joined into one park, km.
pub const PARK_RADIUS_KM: f64 = 5.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Park {
    pub park_id: String,
    pub tech: Resource,
    pub region: String,
    /// Member placement ids, ascending.
    pub members: Vec<String>,
    /// Capacity-weighted centroid of the members.
    pub centroid: GeoPoint<f64>,
    /// Allocated capacity, kW.
    pub capacity_kw: f64,
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }

    fn find(&mut self, mut i: usize) -> usize {
        while self.0[i] != i {
            self.0[i] = self.0[self.0[i]];
            i = self.0[i];
        }
        i
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        // Smaller root wins so the result does not depend on call order.
        if ra < rb {
            self.0[rb] = ra;
        } else if rb < ra {
            self.0[ra] = rb;
        }
    }
}

/// Groups `(placement, used kW)` pairs of one technology and region into
/// parks: any two members are linked by hops of at most
/// [`PARK_RADIUS_KM`]. Parks are numbered by their smallest member id.
pub fn cluster_parks(allocated: &[(&PlacementInfo, f64)]) -> Vec<Park> {
    let mut items: Vec<(&PlacementInfo, f64)> = allocated.to_vec();
    items.sort_by(|a, b| a.0.id.cmp(&b.0.id));
    let n = items.len();

    // Sweep in latitude order; pairs further apart in latitude than the
    // radius cannot be linked.
    let mut by_lat: Vec<usize> = (0..n).collect();
    by_lat.sort_by(|&a, &b| items[a].0.lat.total_cmp(&items[b].0.lat).then(a.cmp(&b)));
    let dlat = km_to_lat_deg(PARK_RADIUS_KM);
    let mut uf = UnionFind::new(n);
    for (i, &a) in by_lat.iter().enumerate() {
        for &b in &by_lat[i + 1..] {
            if items[b].0.lat - items[a].0.lat > dlat {
                break;
            }
            if items[a].0.tech == items[b].0.tech
                && items[a].0.region == items[b].0.region
                && items[a].0.location().distance_km(&items[b].0.location()) <= PARK_RADIUS_KM
            {
                uf.union(a, b);
            }
        }
    }

    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut slot = vec![usize::MAX; n];
    for i in 0..n {
        let r = uf.find(i);
        if slot[r] == usize::MAX {
            slot[r] = groups.len();
            groups.push(Vec::new());
        }
        groups[slot[r]].push(i);
    }

    groups
        .into_iter()
        .enumerate()
        .map(|(k, members)| {
            let first = items[members[0]].0;
            let pts: Vec<(GeoPoint<f64>, f64)> = members.iter().map(|&i| (items[i].0.location(), items[i].1)).collect();
            Park {
                park_id: format!("{}-{}-park{:03}", first.region, first.tech, k),
                tech: first.tech,
                region: first.region.clone(),
                members: members.iter().map(|&i| items[i].0.id.clone()).collect(),
                centroid: weighted_centroid(&pts).expect("non-empty park"),
                capacity_kw: members.iter().map(|&i| items[i].1).sum(),
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn at(id: &str, north_km: f64, east_km: f64) -> PlacementInfo {
        PlacementInfo {
            id: id.into(),
            tech: Resource::Wind,
            region: "R".into(),
            lat: km_to_lat_deg(north_km),
            lon: km_to_lat_deg(east_km),
            capacity_kw: 1.0,
            flh: 3000.0,
        }
    }

    fn parks_of(ps: &[PlacementInfo]) -> Vec<Vec<String>> {
        let alloc: Vec<(&PlacementInfo, f64)> = ps.iter().map(|p| (p, 1.0)).collect();
        cluster_parks(&alloc).into_iter().map(|p| p.members).collect()
    }

    #[test]
    fn close_placements_merge() {
        let h = 3f64.sqrt();
        let ps = [at("a", 0.0, 0.0), at("b", 0.0, 2.0), at("c", h, 1.0)];
        assert_eq!(parks_of(&ps).len(), 1);
    }

    #[test]
    fn distant_placements_stay_apart() {
        let ps = [at("a", 0.0, 0.0), at("b", 10.0, 0.0)];
        assert_eq!(parks_of(&ps), vec![vec!["a".to_string()], vec!["b".to_string()]]);
    }

    #[test]
    fn chains_link_transitively() {
        let ps = [at("a", 0.0, 0.0), at("b", 4.0, 0.0), at("c", 8.0, 0.0)];
        assert_eq!(parks_of(&ps), vec![vec!["a".to_string(), "b".to_string(), "c".to_string()]]);
    }

    #[test]
    fn order_independent() {
        let ps = vec![at("d", 20.0, 0.0), at("a", 0.0, 0.0), at("c", 8.0, 0.0), at("b", 4.0, 0.0)];
        let mut rev = ps.clone();
        rev.reverse();
        let alloc: Vec<(&PlacementInfo, f64)> = ps.iter().map(|p| (p, 1.0)).collect();
        let alloc_rev: Vec<(&PlacementInfo, f64)> = rev.iter().map(|p| (p, 1.0)).collect();
        assert_eq!(cluster_parks(&alloc), cluster_parks(&alloc_rev));
    }
}
