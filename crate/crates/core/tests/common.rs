#![allow(dead_code)]

use h2export::datamodel::{ScenarioConfig, Year};
use h2export::geo::GeoPoint;
use h2export::network::{Arc, Node, RegionGraph};
use h2export::potentials::{ClusterPotential, Resource};

/// Closed-form capital recovery factor, written out independently of the
/// library.
pub fn crf(r: f64, n: f64) -> f64 {
    let g = (1.0 + r).powf(n);
    r * g / (g - 1.0)
}

/// EUR/yr per unit of capex `c` with OPEX share `o` over `n` years at 8%.
pub fn annual(c: f64, o: f64, n: f64) -> f64 {
    c * (crf(0.08, n) + o)
}

pub fn cluster(region: &str, tech: Resource, bound: f64, cf: Vec<f64>) -> ClusterPotential {
    ClusterPotential {
        cluster_id: format!("{region}-{tech}-00"),
        tech,
        region: region.into(),
        capacity_bound: bound,
        flh: cf.iter().sum(),
        cf,
        member_ids: vec![format!("{region}-{tech}-p0")],
    }
}

pub fn one_region() -> RegionGraph {
    RegionGraph::single_region("R", GeoPoint::new(20.0, 56.0).unwrap())
}

pub fn remote_harbor(km: f64) -> RegionGraph {
    let p = GeoPoint::new(20.0, 56.0).unwrap();
    RegionGraph::new(
        vec![
            Node { id: "R".into(), location: p, is_harbor: false },
            Node { id: "harbor".into(), location: p, is_harbor: true },
        ],
        vec![Arc { a: 0, b: 1, length_km: km }],
    )
    .unwrap()
}

pub fn cfg(hours: usize) -> ScenarioConfig {
    ScenarioConfig::new("X", Year::Y2050, 0.1).with_horizon(hours)
}

/// Solar-like profile: zero at night, a half-sine by day.
pub fn diurnal(hours: usize) -> Vec<f64> {
    (0..hours)
        .map(|t| {
            let h = (t % 24) as f64;
            if (6.0..18.0).contains(&h) {
                (std::f64::consts::PI * (h - 6.0) / 12.0).sin().max(0.0) * 0.9
            } else {
                0.0
            }
        })
        .collect()
}
