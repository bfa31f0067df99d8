//! Sparsifying an expander by embedding a random regular graph into it.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use log::warn;
use serde::Serialize;

use crate::generators::gen_random_regular;
use crate::graph::{component_labels, EdgeId, Graph, NoEdges, NodeId};
use crate::lbc::layered::cheapest_path;
use crate::{Error, Result};

#[derive(Clone, Debug, Serialize)]
pub struct RoutingResult {
    /// One path per virtual edge, as edge ids of the cluster.
    pub paths: Vec<Vec<EdgeId>>,
    /// Largest number of paths sharing an edge.
    pub congestion: usize,
    /// Longest path, in hops.
    pub dilation: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct Sparsified {
    /// Union of the routing paths, ascending cluster edge ids.
    pub edges: Vec<EdgeId>,
    pub routing: RoutingResult,
    /// Degree of the virtual graph actually used.
    pub virtual_degree: usize,
    pub hop_cap: usize,
    /// Demands that could not be routed within `hop_cap` hops.
    pub uncapped: usize,
    /// Minimum degree of the output.
    pub min_degree: usize,
}

/// `⌈4 ln n / φ⌉`, at least 1.
pub fn hop_cap(n: usize, phi: f64) -> usize {
    ((4.0 * (n.max(2) as f64).ln() / phi).ceil() as usize).max(1)
}

/// Cheapest path under integer edge costs; ties go to the earlier relaxation.
fn dijkstra_path(g: &Graph, s: NodeId, t: NodeId, cost: &[u64]) -> Option<Vec<EdgeId>> {
    let n = g.n();
    let mut dist = vec![u64::MAX; n];
    let mut parent: Vec<Option<(NodeId, EdgeId)>> = vec![None; n];
    let mut heap = BinaryHeap::new();
    dist[s] = 0;
    heap.push(Reverse((0u64, s)));
    while let Some(Reverse((d, x))) = heap.pop() {
        if d > dist[x] {
            continue;
        }
        if x == t {
            break;
        }
        for &(y, e) in g.neighbors(x) {
            let nd = d + cost[e];
            if nd < dist[y] {
                dist[y] = nd;
                parent[y] = Some((x, e));
                heap.push(Reverse((nd, y)));
            }
        }
    }
    if dist[t] == u64::MAX {
        return None;
    }
    let mut path = Vec::new();
    let mut x = t;
    while let Some((p, e)) = parent[x] {
        path.push(e);
        x = p;
    }
    path.reverse();
    Some(path)
}

/// Routes a random `fprime2`-regular virtual graph through `cluster` along
/// congestion-aware shortest paths (cost `1 + load`, at most
/// [`hop_cap`] hops) and returns the union of the paths.
///
/// The virtual degree is `min(fprime2, n−1)`, lowered by one when `n·d` is odd.
pub fn sparsify_expander(
    cluster: &Graph,
    fprime2: usize,
    phi: f64,
    seed: u64,
) -> Result<Sparsified> {
    if !(phi > 0.0 && phi < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "phi must lie in (0, 1), got {phi}"
        )));
    }
    let n = cluster.n();
    if n > 1 && component_labels(cluster, &NoEdges).iter().any(|&l| l != 0) {
        return Err(Error::Disconnected);
    }
    let mut d = fprime2.min(n.saturating_sub(1));
    if (n * d) % 2 == 1 {
        d -= 1;
    }
    let cap = hop_cap(n, phi);
    let demands = gen_random_regular(n, d, seed)?;

    let mut load = vec![0usize; cluster.m()];
    let mut cost = vec![1u64; cluster.m()];
    let mut paths = Vec::with_capacity(demands.m());
    let mut uncapped = 0;
    for demand in demands.edges() {
        let (s, t) = (demand.u, demand.v);
        let mut path = dijkstra_path(cluster, s, t, &cost).ok_or(Error::Disconnected)?;
        if path.len() > cap {
            match cheapest_path(cluster, s, t, cap, |e| Some(cost[e] as f64)) {
                Some(p) => path = p.edges,
                None => {
                    uncapped += 1;
                    warn!(
                        "demand ({s}, {t}) needs {} hops, above the cap of {cap}",
                        path.len()
                    );
                }
            }
        }
        for &e in &path {
            load[e] += 1;
            cost[e] += 1;
        }
        paths.push(path);
    }

    let edges: Vec<EdgeId> = (0..cluster.m()).filter(|&e| load[e] > 0).collect();
    let mut degree = vec![0usize; n];
    for &e in &edges {
        degree[cluster.edge(e).u] += 1;
        degree[cluster.edge(e).v] += 1;
    }
    let routing = RoutingResult {
        congestion: load.iter().copied().max().unwrap_or(0),
        dilation: paths.iter().map(Vec::len).max().unwrap_or(0),
        paths,
    };
    Ok(Sparsified {
        edges,
        routing,
        virtual_degree: d,
        hop_cap: cap,
        uncapped,
        min_degree: degree.iter().copied().min().unwrap_or(0),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::gen_named;
    use crate::graph::conductance_spectral_lower_bound;

    #[test]
    fn complete_graph_with_full_degree_is_kept() {
        let k = gen_named("complete-9").unwrap();
        // n·d = 72 is even
        let s = sparsify_expander(&k, 8, 0.3, 1).unwrap();
        assert_eq!(s.edges.len(), k.m());
        assert_eq!(s.routing.congestion, 1);
        assert_eq!(s.routing.dilation, 1);
    }

    #[test]
    fn odd_product_lowers_the_degree() {
        let k = gen_named("complete-7").unwrap();
        let s = sparsify_expander(&k, 3, 0.3, 1).unwrap();
        assert_eq!(s.virtual_degree, 2);
    }

    #[test]
    fn complete_sixteen_stays_small_and_connected() {
        let k = gen_named("complete-16").unwrap();
        let s = sparsify_expander(&k, 4, 0.3, 7).unwrap();
        let cap = hop_cap(16, 0.3);
        assert!(s.edges.len() <= 4 * 16 * cap / 2);
        let h = k.edge_subgraph(&s.edges).unwrap().graph;
        assert!(component_labels(&h, &NoEdges).iter().all(|&l| l == 0));
        assert_eq!(s.uncapped, 0);
    }

    #[test]
    fn regular_expander_routes_within_cap() {
        let g = crate::generators::gen_random_regular(200, 12, 5).unwrap();
        let s = sparsify_expander(&g, 6, 0.2, 9).unwrap();
        assert!(s.routing.dilation <= s.hop_cap);
        assert_eq!(s.routing.paths.len(), 600);
        let h = g.edge_subgraph(&s.edges).unwrap().graph;
        assert!(conductance_spectral_lower_bound(&h).unwrap() > 0.0);
    }

    #[test]
    fn paths_join_their_demands() {
        let g = gen_named("petersen").unwrap();
        let s = sparsify_expander(&g, 2, 0.3, 4).unwrap();
        for p in &s.routing.paths {
            let mut ends = std::collections::HashMap::new();
            for &e in p {
                *ends.entry(g.edge(e).u).or_insert(0) += 1;
                *ends.entry(g.edge(e).v).or_insert(0) += 1;
            }
            assert_eq!(ends.values().filter(|&&c| c == 1).count(), 2);
        }
    }
}
