//! Renewable placements, full-load-hour clustering and the maximum
//! exportable hydrogen.

mod cache;
mod io;

pub use cache::{ClusterCache, PlacementInfo, CACHE_SCHEMA_VERSION};
pub use io::{read_capacity_factors, read_placements, read_placements_meta, PlacementRow};

use std::cmp::Ordering;
use std::fmt;

use num_traits::Float;
use serde::{Deserialize, Serialize};

use crate::datamodel::{TechnoEconomics, Technology, Year, HOURS_PER_YEAR};
use crate::error::{Error, Result};
use crate::geo::GeoPoint;

/// Share of capacity that forms the dedicated best-placements cluster.
pub const TOP_SHARE: f64 = 0.05;
/// Number of evenly spaced capacity quantile bins below the top cluster.
pub const QUANTILE_BINS: usize = 10;

/// Renewable generation technology of a placement.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Resource {
    Pv,
    Wind,
}

impl Resource {
    pub fn technology(self) -> Technology {
        match self {
            Resource::Pv => Technology::Pv,
            Resource::Wind => Technology::Wind,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Resource::Pv => "pv",
            Resource::Wind => "wind",
        }
    }
}

impl fmt::Display for Resource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Resource {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "pv" => Ok(Resource::Pv),
            "wind" => Ok(Resource::Wind),
            other => Err(Error::input(format!("unknown technology `{other}`"))),
        }
    }
}

/// A candidate site for PV or wind with its hourly capacity factors.
#[derive(Debug, Clone, PartialEq)]
pub struct Placement {
    pub id: String,
    pub tech: Resource,
    pub region: String,
    pub location: GeoPoint<f64>,
    /// kW_el
    pub capacity_kw: f64,
    pub cf: Vec<f64>,
}

impl Placement {
    pub fn flh(&self) -> f64 {
        self.cf.iter().sum()
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.capacity_kw > 0.0) || !self.capacity_kw.is_finite() {
            return Err(Error::input(format!("placement {}: capacity must be positive", self.id)));
        }
        self.location
            .validate()
            .map_err(|e| Error::input(format!("placement {}: {e}", self.id)))?;
        if let Some((t, v)) = self.cf.iter().enumerate().find(|(_, v)| !(0.0..=1.0).contains(*v)) {
            return Err(Error::input(format!(
                "placement {}: capacity factor {v} at hour {t} outside [0, 1]",
                self.id
            )));
        }
        Ok(())
    }
}

/// Deterministic ordering: descending full load hours, ties by id.
pub(crate) fn by_flh_desc(a_flh: f64, a_id: &str, b_flh: f64, b_id: &str) -> Ordering {
    b_flh.total_cmp(&a_flh).then_with(|| a_id.cmp(b_id))
}

/// Aggregated potential of a group of placements with similar full load
/// hours in one region.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusterPotential {
    pub cluster_id: String,
    pub tech: Resource,
    pub region: String,
    /// kW_el, sum of member capacities.
    pub capacity_bound: f64,
    /// Capacity-weighted mean of member series.
    pub cf: Vec<f64>,
    pub flh: f64,
    /// Members in descending FLH order.
    pub member_ids: Vec<String>,
}

impl ClusterPotential {
    /// Full load hours over the first `hours` of the series, scaled to a year.
    pub fn annual_flh(&self, hours: usize) -> f64 {
        let h = hours.min(self.cf.len());
        if h == 0 {
            return 0.0;
        }
        self.cf[..h].iter().sum::<f64>() * HOURS_PER_YEAR as f64 / h as f64
    }
}

/// Splits the placements of one region and technology into at most eleven
/// clusters: the best 5% of capacity, then ten evenly spaced capacity
/// quantiles of the remaining FLH ordering.
pub fn cluster_region(placements: &[Placement]) -> Result<Vec<ClusterPotential>> {
    let Some(first) = placements.first() else {
        return Ok(Vec::new());
    };
    let len = first.cf.len();
    for p in placements {
        if p.region != first.region || p.tech != first.tech {
            return Err(Error::input(format!(
                "cluster_region expects one region and technology, got {}/{} and {}/{}",
                first.region, first.tech, p.region, p.tech
            )));
        }
        if p.cf.len() != len {
            return Err(Error::input(format!(
                "placement {} has {} hours, expected {len}",
                p.id,
                p.cf.len()
            )));
        }
        p.validate()?;
    }

    let mut order: Vec<(f64, &Placement)> = placements.iter().map(|p| (p.flh(), p)).collect();
    order.sort_by(|a, b| by_flh_desc(a.0, &a.1.id, b.0, &b.1.id));

    let total: f64 = order.iter().map(|(_, p)| p.capacity_kw).sum();
    let top_limit = TOP_SHARE * total;

    let mut groups: Vec<Vec<&Placement>> = vec![Vec::new(); QUANTILE_BINS + 1];
    let mut start = 0.0;
    let mut split = order.len();
    for (i, (_, p)) in order.iter().enumerate() {
        if start < top_limit {
            groups[0].push(p);
            start += p.capacity_kw;
        } else {
            split = i;
            break;
        }
    }
    let rest = &order[split.min(order.len())..];
    let rest_total: f64 = rest.iter().map(|(_, p)| p.capacity_kw).sum();
    let mut start = 0.0;
    for (_, p) in rest {
        let bin = ((QUANTILE_BINS as f64 * start / rest_total).floor() as usize).min(QUANTILE_BINS - 1);
        groups[bin + 1].push(p);
        start += p.capacity_kw;
    }

    Ok(groups
        .into_iter()
        .enumerate()
        .filter(|(_, members)| !members.is_empty())
        .map(|(k, members)| aggregate(k, &members, len))
        .collect())
}

fn aggregate(index: usize, members: &[&Placement], len: usize) -> ClusterPotential {
    let first = members[0];
    let capacity: f64 = members.iter().map(|p| p.capacity_kw).sum();
    let mut cf = vec![0.0; len];
    for p in members {
        let w = p.capacity_kw / capacity;
        for (acc, v) in cf.iter_mut().zip(&p.cf) {
            *acc += w * v;
        }
    }
    for v in &mut cf {
        *v = v.clamp(0.0, 1.0);
    }
    let flh = cf.iter().sum();
    ClusterPotential {
        cluster_id: format!("{}-{}-{:02}", first.region, first.tech, index),
        tech: first.tech,
        region: first.region.clone(),
        capacity_bound: capacity,
        cf,
        flh,
        member_ids: members.iter().map(|p| p.id.clone()).collect(),
    }
}

/// Clusters every region/technology group; output is ordered by region,
/// technology, then cluster index.
pub fn cluster_all(placements: &[Placement]) -> Result<Vec<ClusterPotential>> {
    let mut groups: std::collections::BTreeMap<(String, Resource), Vec<Placement>> =
        std::collections::BTreeMap::new();
    for p in placements {
        groups
            .entry((p.region.clone(), p.tech))
            .or_default()
            .push(p.clone());
    }
    let mut out = Vec::new();
    for members in groups.values() {
        out.extend(cluster_region(members)?);
    }
    Ok(out)
}

/// Hydrogen (LHV) obtainable from `electricity` when every kWh feeds
/// electrolysis at efficiency `pem_eff` plus the liquefier's electricity
/// demand `liq_el_demand` per kWh_LHV: `m / pem_eff + liq_el_demand * m = E`.
pub fn max_export_with<T: Float>(electricity: T, pem_eff: T, liq_el_demand: T) -> Result<T> {
    if !(electricity >= T::zero()) {
        return Err(Error::param("electrical potential must be non-negative"));
    }
    if !(pem_eff > T::zero()) || !(liq_el_demand >= T::zero()) {
        return Err(Error::param("invalid conversion parameters"));
    }
    Ok(electricity / (pem_eff.recip() + liq_el_demand))
}

/// Maximum exportable LH2 in kWh_LHV/yr for a total electrical potential in
/// kWh_el/yr.
pub fn max_export(total_el_potential: f64, te: &TechnoEconomics, year: Year) -> Result<f64> {
    max_export_with(total_el_potential, te.pem_eff(year), te.liq_el_demand)
}

/// Annual electricity potential (kWh_el/yr) of the clusters over the first
/// `hours` of their series.
pub fn annual_el_potential(clusters: &[ClusterPotential], hours: usize) -> f64 {
    clusters
        .iter()
        .map(|c| c.capacity_bound * c.annual_flh(hours))
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn placement(id: &str, cap: f64, cf: Vec<f64>) -> Placement {
        Placement {
            id: id.into(),
            tech: Resource::Pv,
            region: "R".into(),
            location: GeoPoint { lat: 0.0, lon: 0.0 },
            capacity_kw: cap,
            cf,
        }
    }

    /// Independent quantile cut: walk placements in FLH order and assign
    /// each by the capacity that precedes it.
    fn oracle_groups(mut items: Vec<(String, f64, f64)>) -> Vec<Vec<String>> {
        items.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap().then(a.0.cmp(&b.0)));
        let total: f64 = items.iter().map(|x| x.2).sum();
        let mut out: Vec<Vec<String>> = vec![vec![]; 11];
        let mut before = 0.0;
        let mut top_done = false;
        let mut top_cap = 0.0;
        for it in &items {
            if !top_done && before < 0.05 * total {
                out[0].push(it.0.clone());
                top_cap += it.2;
            } else {
                top_done = true;
            }
            before += it.2;
        }
        let rest_total = total - top_cap;
        let mut before = 0.0;
        for it in items.iter().skip(out[0].len()) {
            let mut k = 0;
            while k < 9 && before >= (k as f64 + 1.0) * rest_total / 10.0 {
                k += 1;
            }
            out[k + 1].push(it.0.clone());
            before += it.2;
        }
        out.into_iter().filter(|g| !g.is_empty()).collect()
    }

    #[test]
    fn twenty_equal_placements_make_eleven_clusters() {
        let ps: Vec<Placement> = (0..20)
            .map(|i| {
                let flh = 1000.0 + 50.0 * i as f64;
                // two-hour series summing to the target FLH / 8760 share
                placement(&format!("p{i:02}"), 1.0, vec![flh / 8760.0, 0.0])
            })
            .collect();
        let clusters = cluster_region(&ps).unwrap();
        assert_eq!(clusters.len(), 11);
        assert_eq!(clusters[0].member_ids, vec!["p19".to_string()]);
        let sizes: Vec<usize> = clusters[1..].iter().map(|c| c.member_ids.len()).collect();
        assert_eq!(sizes.iter().sum::<usize>(), 19);
        assert!(sizes.iter().all(|&s| s == 1 || s == 2));

        let oracle = oracle_groups(
            ps.iter()
                .map(|p| (p.id.clone(), p.flh(), p.capacity_kw))
                .collect(),
        );
        let got: Vec<Vec<String>> = clusters.iter().map(|c| c.member_ids.clone()).collect();
        assert_eq!(got, oracle);
    }

    #[test]
    fn singleton_keeps_series() {
        let p = placement("a", 3.0, vec![0.2, 0.7, 0.1]);
        let clusters = cluster_region(std::slice::from_ref(&p)).unwrap();
        assert_eq!(clusters.len(), 1);
        assert_eq!(clusters[0].cf, p.cf);
        assert_eq!(clusters[0].capacity_bound, 3.0);
    }

    #[test]
    fn identical_series_stay_identical() {
        let cf = vec![0.3, 0.6, 0.9, 0.0];
        let ps = vec![placement("a", 1.0, cf.clone()), placement("b", 3.0, cf.clone())];
        let clusters = cluster_region(&ps).unwrap();
        for c in &clusters {
            for (x, y) in c.cf.iter().zip(&cf) {
                assert!((x - y).abs() < 1e-15);
            }
        }
        let total: f64 = clusters.iter().map(|c| c.capacity_bound).sum();
        assert_eq!(total, 4.0);
    }

    #[test]
    fn empty_and_mixed_inputs() {
        assert!(cluster_region(&[]).unwrap().is_empty());
        let mut b = placement("b", 1.0, vec![0.5]);
        b.region = "other".into();
        assert!(cluster_region(&[placement("a", 1.0, vec![0.5]), b]).is_err());
        assert!(cluster_region(&[placement("a", 1.0, vec![1.5])]).is_err());
    }

    #[test]
    fn ties_are_broken_by_id() {
        let ps: Vec<Placement> = ["d", "b", "a", "c"]
            .iter()
            .map(|id| placement(id, 1.0, vec![0.5]))
            .collect();
        let clusters = cluster_region(&ps).unwrap();
        let flat: Vec<String> = clusters.iter().flat_map(|c| c.member_ids.clone()).collect();
        assert_eq!(flat, vec!["a", "b", "c", "d"]);
    }

    #[test]
    fn max_export_balance() {
        let te = TechnoEconomics::default();
        let m = max_export(1e9, &te, Year::Y2050).unwrap();
        assert!((m / 1e9 - 0.6425).abs() < 1e-4);
        // push m through the chain: electrolysis draw plus liquefier draw
        let used = m / 0.74 + 0.205 * m;
        assert!((used - 1e9).abs() < 1e-3);
        assert_eq!(max_export(0.0, &te, Year::Y2020).unwrap(), 0.0);
        assert!(max_export(-1.0, &te, Year::Y2020).is_err());
    }

    #[test]
    fn aggregate_potential_of_the_country_table() {
        // PV and onshore wind energy in PWh_el/yr, 28 countries
        let pv = [
            292.93, 35.75, 734.41, 96.25, 240.15, 177.90, 48.75, 27.28, 0.39, 0.22, 0.32, 0.13,
            0.13, 0.20, 73.84, 50.25, 31.61, 0.40, 0.08, 52.11, 294.59, 93.20, 42.25, 188.40,
            0.61, 0.15, 1.29, 1.92,
        ];
        let wind = [
            15.41, 4.33, 67.93, 46.16, 45.89, 26.84, 2.48, 0.74, 0.56, 0.19, 0.86, 0.37, 0.29,
            0.44, 80.54, 3.75, 8.69, 0.83, 0.19, 2.00, 13.8, 6.1, 3.03, 49.29, 0.85, 0.42, 0.9,
            0.94,
        ];
        let total: f64 = pv.iter().chain(wind.iter()).sum();
        assert!((total - 2869.0).abs() < 5.0, "{total}");
        let te = TechnoEconomics::default();
        let m = max_export(total, &te, Year::Y2050).unwrap();
        assert!(m > 1540.0 && m < 1900.0, "{m}");
    }
}
