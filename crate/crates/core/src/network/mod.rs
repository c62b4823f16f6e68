//! Greenfield transport topology between region centroids and the export
//! harbor.

mod io;

pub use io::{read_adjacency, read_regions};

use num_traits::Float;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geo::GeoPoint;

/// Node id reserved for the export harbor.
pub const HARBOR_ID: &str = "harbor";

/// Length substituted for zero-length arcs, km.
pub const MIN_ARC_KM: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Carrier {
    Electricity,
    Hydrogen,
}

/// Transmission efficiency of an arc: linear loss for electricity,
/// lossless for hydrogen pipelines.
pub fn arc_efficiency<T: Float>(carrier: Carrier, length_km: T, loss_per_1000km: T) -> Result<T> {
    if !(length_km >= T::zero()) {
        return Err(Error::param("arc length must be non-negative"));
    }
    match carrier {
        Carrier::Hydrogen => Ok(T::one()),
        Carrier::Electricity => {
            let k = T::from(1000.0).unwrap();
            Ok((T::one() - loss_per_1000km * length_km / k).max(T::zero()))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Region {
    pub id: String,
    pub centroid: GeoPoint<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Node {
    pub id: String,
    pub location: GeoPoint<f64>,
    pub is_harbor: bool,
}

/// Undirected arc between two node indices.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Arc {
    pub a: usize,
    pub b: usize,
    pub length_km: f64,
}

/// Where the export harbor sits.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum HarborSpec {
    Region { region: String },
    Point { lat: f64, lon: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegionGraph {
    nodes: Vec<Node>,
    arcs: Vec<Arc>,
    harbor: usize,
}

impl RegionGraph {
    /// Validated constructor. A graph with a single node may have that node
    /// double as the harbor and carry no arcs.
    pub fn new(nodes: Vec<Node>, arcs: Vec<Arc>) -> Result<Self> {
        if nodes.is_empty() {
            return Err(Error::Graph("graph has no nodes".into()));
        }
        let harbors: Vec<usize> = (0..nodes.len()).filter(|&i| nodes[i].is_harbor).collect();
        if harbors.len() != 1 {
            return Err(Error::Graph(format!("expected one harbor node, found {}", harbors.len())));
        }
        let mut ids = std::collections::HashSet::new();
        for n in &nodes {
            if !ids.insert(n.id.as_str()) {
                return Err(Error::Graph(format!("duplicate node id {}", n.id)));
            }
        }
        for arc in &arcs {
            if arc.a >= nodes.len() || arc.b >= nodes.len() || arc.a == arc.b {
                return Err(Error::Graph(format!("invalid arc {}-{}", arc.a, arc.b)));
            }
            if !(arc.length_km > 0.0) {
                return Err(Error::Graph(format!(
                    "arc {}-{} has non-positive length",
                    nodes[arc.a].id, nodes[arc.b].id
                )));
            }
        }
        let graph = RegionGraph {
            harbor: harbors[0],
            nodes,
            arcs,
        };
        if graph.components().into_iter().max().unwrap_or(0) != 0 {
            return Err(Error::Graph("graph is not connected".into()));
        }
        Ok(graph)
    }

    /// A one-node system whose only region is also the export location.
    pub fn single_region(id: impl Into<String>, location: GeoPoint<f64>) -> Self {
        RegionGraph {
            nodes: vec![Node {
                id: id.into(),
                location,
                is_harbor: true,
            }],
            arcs: Vec::new(),
            harbor: 0,
        }
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    pub fn harbor(&self) -> usize {
        self.harbor
    }

    pub fn node_index(&self, id: &str) -> Option<usize> {
        self.nodes.iter().position(|n| n.id == id)
    }

    pub fn length_between(&self, a: usize, b: usize) -> Option<f64> {
        self.arcs
            .iter()
            .find(|arc| (arc.a == a && arc.b == b) || (arc.a == b && arc.b == a))
            .map(|arc| arc.length_km)
    }

    /// Component label per node (labels are dense, starting at 0 for the
    /// component of node 0).
    fn components(&self) -> Vec<usize> {
        components(self.nodes.len(), self.arcs.iter().map(|a| (a.a, a.b)))
    }
}

fn components(n: usize, edges: impl Iterator<Item = (usize, usize)>) -> Vec<usize> {
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for (a, b) in edges {
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra != rb {
            parent[ra.max(rb)] = ra.min(rb);
        }
    }
    let mut labels = vec![usize::MAX; n];
    let mut next = 0;
    let mut out = vec![0; n];
    for i in 0..n {
        let r = find(&mut parent, i);
        if labels[r] == usize::MAX {
            labels[r] = next;
            next += 1;
        }
        out[i] = labels[r];
    }
    out
}

fn detoured(a: &GeoPoint<f64>, b: &GeoPoint<f64>, detour: f64) -> f64 {
    let d = a.distance_km(b) * detour;
    if d > 0.0 {
        d
    } else {
        MIN_ARC_KM
    }
}

/// Builds the transport graph: detoured centroid-to-centroid arcs for every
/// adjacency, one arc from each disconnected part to the nearest mainland
/// node, and a harbor node attached to its host region.
pub fn build_graph(
    regions: &[Region],
    adjacency: &[(String, String)],
    harbor: &HarborSpec,
    detour_factor: f64,
) -> Result<RegionGraph> {
    if regions.is_empty() {
        return Err(Error::Graph("region set is empty".into()));
    }
    if !(detour_factor >= 1.0) {
        return Err(Error::param("detour factor must be at least 1"));
    }
    let mut nodes: Vec<Node> = Vec::with_capacity(regions.len() + 1);
    for r in regions {
        if r.id == HARBOR_ID {
            return Err(Error::Graph(format!("region id `{HARBOR_ID}` is reserved")));
        }
        if nodes.iter().any(|n| n.id == r.id) {
            return Err(Error::Graph(format!("duplicate region id {}", r.id)));
        }
        r.centroid.validate()?;
        nodes.push(Node {
            id: r.id.clone(),
            location: r.centroid,
            is_harbor: false,
        });
    }
    let index = |id: &str| {
        nodes
            .iter()
            .position(|n| n.id == id)
            .ok_or_else(|| Error::Graph(format!("adjacency references unknown region {id}")))
    };

    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for (a, b) in adjacency {
        let (ia, ib) = (index(a)?, index(b)?);
        if ia == ib {
            continue;
        }
        let key = (ia.min(ib), ia.max(ib));
        if !pairs.contains(&key) {
            pairs.push(key);
        }
    }

    // Attach remote parts to the largest component.
    let labels = components(nodes.len(), pairs.iter().copied());
    let n_comp = labels.iter().max().map_or(0, |m| m + 1);
    let mut sizes = vec![0usize; n_comp];
    for &l in &labels {
        sizes[l] += 1;
    }
    let mainland = (0..n_comp).max_by(|&a, &b| sizes[a].cmp(&sizes[b]).then(b.cmp(&a))).unwrap_or(0);
    for comp in (0..n_comp).filter(|&c| c != mainland) {
        let mut best: Option<(f64, usize, usize)> = None;
        for u in (0..nodes.len()).filter(|&u| labels[u] == comp) {
            for v in (0..nodes.len()).filter(|&v| labels[v] == mainland) {
                let d = nodes[u].location.distance_km(&nodes[v].location);
                if best.is_none_or(|(bd, _, _)| d < bd) {
                    best = Some((d, u, v));
                }
            }
        }
        if let Some((_, u, v)) = best {
            pairs.push((u.min(v), u.max(v)));
        }
    }

    let mut arcs: Vec<Arc> = pairs
        .into_iter()
        .map(|(a, b)| Arc {
            a,
            b,
            length_km: detoured(&nodes[a].location, &nodes[b].location, detour_factor),
        })
        .collect();

    let (host, location) = match harbor {
        HarborSpec::Region { region } => {
            let host = index(region)?;
            (host, nodes[host].location)
        }
        HarborSpec::Point { lat, lon } => {
            let p = GeoPoint::new(*lat, *lon)?;
            let host = (0..nodes.len())
                .min_by(|&a, &b| {
                    nodes[a]
                        .location
                        .distance_km(&p)
                        .total_cmp(&nodes[b].location.distance_km(&p))
                })
                .unwrap_or(0);
            (host, p)
        }
    };
    let harbor_idx = nodes.len();
    nodes.push(Node {
        id: HARBOR_ID.to_string(),
        location,
        is_harbor: true,
    });
    arcs.push(Arc {
        a: host,
        b: harbor_idx,
        length_km: detoured(&nodes[host].location, &location, detour_factor),
    });

    RegionGraph::new(nodes, arcs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geo::km_to_lat_deg;

    fn region(id: &str, lat: f64, lon: f64) -> Region {
        Region {
            id: id.into(),
            centroid: GeoPoint { lat, lon },
        }
    }

    #[test]
    fn detour_applies_to_great_circle_length() {
        let regions = [region("A", 0.0, 10.0), region("B", km_to_lat_deg(100.0), 10.0)];
        let g = build_graph(
            &regions,
            &[("A".into(), "B".into())],
            &HarborSpec::Region { region: "A".into() },
            1.3,
        )
        .unwrap();
        assert!((g.length_between(0, 1).unwrap() - 130.0).abs() < 1e-9);
        assert_eq!(g.arcs().len(), 2);
        assert_eq!(g.nodes()[g.harbor()].id, HARBOR_ID);
    }

    #[test]
    fn harbor_on_centroid_gets_minimum_length() {
        let g = build_graph(
            &[region("A", 5.0, 5.0)],
            &[],
            &HarborSpec::Region { region: "A".into() },
            1.3,
        )
        .unwrap();
        assert_eq!(g.nodes().len(), 2);
        assert_eq!(g.arcs().len(), 1);
        assert_eq!(g.arcs()[0].length_km, MIN_ARC_KM);
    }

    #[test]
    fn island_connects_to_nearest_mainland_node() {
        let regions = [region("A", 0.0, 0.0), region("B", 0.0, 2.0), region("C", 0.5, 3.0)];
        let g = build_graph(
            &regions,
            &[("A".into(), "B".into())],
            &HarborSpec::Region { region: "A".into() },
            1.3,
        )
        .unwrap();
        // nearest-neighbour oracle over pairwise haversine distances
        let c = regions[2].centroid;
        let (nearest, d) = [0usize, 1]
            .iter()
            .map(|&i| (i, regions[i].centroid.distance_km(&c)))
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .unwrap();
        assert_eq!(nearest, 1);
        assert!((g.length_between(2, nearest).unwrap() - 1.3 * d).abs() < 1e-9);
        assert!(g.length_between(2, 0).is_none());
    }

    #[test]
    fn harbor_point_attaches_to_nearest_region() {
        let regions = [region("A", 0.0, 0.0), region("B", 0.0, 2.0)];
        let g = build_graph(
            &regions,
            &[("A".into(), "B".into())],
            &HarborSpec::Point { lat: 0.1, lon: 1.9 },
            1.3,
        )
        .unwrap();
        let h = g.harbor();
        assert!(g.length_between(h, 1).is_some());
        assert!(g.length_between(h, 0).is_none());
    }

    #[test]
    fn rejects_bad_region_sets() {
        let h = HarborSpec::Region { region: "A".into() };
        assert!(build_graph(&[], &[], &h, 1.3).is_err());
        assert!(build_graph(&[region("A", 0.0, 0.0), region("A", 1.0, 1.0)], &[], &h, 1.3).is_err());
        assert!(build_graph(&[region("A", 0.0, 0.0)], &[("A".into(), "Z".into())], &h, 1.3).is_err());
        let missing = HarborSpec::Region { region: "Q".into() };
        assert!(build_graph(&[region("A", 0.0, 0.0)], &[], &missing, 1.3).is_err());
    }

    #[test]
    fn arc_lengths_are_symmetric_and_detoured() {
        let regions = [region("A", 10.0, 10.0), region("B", 11.0, 12.0), region("C", 9.0, 13.0)];
        let adj = [("A".into(), "B".into()), ("C".into(), "B".into())];
        let g = build_graph(&regions, &adj, &HarborSpec::Region { region: "B".into() }, 1.3).unwrap();
        for arc in g.arcs() {
            assert_eq!(g.length_between(arc.a, arc.b), g.length_between(arc.b, arc.a));
            let gc = g.nodes()[arc.a].location.distance_km(&g.nodes()[arc.b].location);
            assert!(arc.length_km >= gc);
        }
    }

    #[test]
    fn efficiency_rule() {
        let eff = |km: f64| arc_efficiency(Carrier::Electricity, km, 0.01).unwrap();
        assert!((eff(500.0) - 0.995).abs() < 1e-15);
        assert_eq!(eff(0.0), 1.0);
        assert!((eff(1000.0) - 0.99).abs() < 1e-15);
        assert_eq!(eff(200_000.0), 0.0);
        assert_eq!(arc_efficiency(Carrier::Hydrogen, 5000.0, 0.01).unwrap(), 1.0);
        assert!(arc_efficiency(Carrier::Electricity, -1.0, 0.01).is_err());
        for km in [1.0, 10.0, 1e3, 5e4, 99_999.0] {
            let e = eff(km);
            assert!(e > 0.0 && e <= 1.0);
        }
    }

    #[test]
    fn disconnected_graph_is_rejected_by_constructor() {
        let n = |id: &str, h: bool| Node {
            id: id.into(),
            location: GeoPoint { lat: 0.0, lon: 0.0 },
            is_harbor: h,
        };
        assert!(RegionGraph::new(vec![n("A", false), n("B", true)], vec![]).is_err());
        assert!(RegionGraph::new(vec![n("A", false)], vec![]).is_err());
        assert!(RegionGraph::new(vec![n("A", true)], vec![]).is_ok());
    }
}
