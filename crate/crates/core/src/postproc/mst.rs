//! Minimum spanning trees for park-level local grids.

use serde::{Deserialize, Serialize};

use crate::geo::GeoPoint;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpanningTree {
    /// Edges `(i, j)` with `i < j`, sorted.
    pub edges: Vec<(usize, usize)>,
    pub total: f64,
}

/// Canonical total of a tree: edge weights summed in sorted edge order, so
/// any method that finds the same tree reports the same bits.
pub fn tree_total(edges: &[(usize, usize)], weight: impl Fn(usize, usize) -> f64) -> f64 {
    let mut sorted: Vec<(usize, usize)> = edges.iter().map(|&(a, b)| (a.min(b), a.max(b))).collect();
    sorted.sort_unstable();
    sorted.iter().map(|&(a, b)| weight(a, b)).sum()
}

/// Prim's algorithm on the complete graph of `n` vertices.
pub fn minimum_spanning_tree(n: usize, weight: impl Fn(usize, usize) -> f64) -> SpanningTree {
    if n < 2 {
        return SpanningTree { edges: Vec::new(), total: 0.0 };
    }
    let mut in_tree = vec![false; n];
    let mut best = vec![f64::INFINITY; n];
    let mut parent = vec![0usize; n];
    in_tree[0] = true;
    for v in 1..n {
        best[v] = weight(0, v);
    }
    let mut edges = Vec::with_capacity(n - 1);
    for _ in 1..n {
        let mut next = usize::MAX;
        for v in 0..n {
            if !in_tree[v] && (next == usize::MAX || best[v] < best[next]) {
                next = v;
            }
        }
        in_tree[next] = true;
        let p = parent[next];
        edges.push((p.min(next), p.max(next)));
        for v in 0..n {
            if !in_tree[v] {
                let w = weight(next, v);
                if w < best[v] {
                    best[v] = w;
                    parent[v] = next;
                }
            }
        }
    }
    edges.sort_unstable();
    let total = tree_total(&edges, &weight);
    SpanningTree { edges, total }
}

/// Local grid over `target` (vertex 0) and `parks` (vertices 1..), with
/// great-circle edge lengths in km.
pub fn mst_connect(target: GeoPoint<f64>, parks: &[GeoPoint<f64>]) -> SpanningTree {
    let pts: Vec<GeoPoint<f64>> = std::iter::once(target).chain(parks.iter().copied()).collect();
    minimum_spanning_tree(pts.len(), |a, b| pts[a].distance_km(&pts[b]))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table(w: &[[f64; 3]; 3]) -> impl Fn(usize, usize) -> f64 + '_ {
        move |a, b| w[a][b]
    }

    #[test]
    fn triangle() {
        let w = [[0.0, 3.0, 5.0], [3.0, 0.0, 4.0], [5.0, 4.0, 0.0]];
        let t = minimum_spanning_tree(3, table(&w));
        assert_eq!(t.total, 7.0);
        assert_eq!(t.edges, vec![(0, 1), (1, 2)]);
    }

    #[test]
    fn collinear() {
        let t = minimum_spanning_tree(3, |a, b| (a as f64 - b as f64).abs());
        assert_eq!(t.total, 2.0);
    }

    #[test]
    fn single_park_at_target() {
        let p = GeoPoint { lat: 10.0, lon: 10.0 };
        let t = mst_connect(p, &[p]);
        assert_eq!(t.total, 0.0);
    }
}
