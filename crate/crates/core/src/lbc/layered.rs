//! Cheapest walk with at most `k` hops, by relaxing `k` layers of the graph.

use crate::graph::{EdgeId, Graph, NodeId};

/// A simple `u`-`v` path with its cost.
#[derive(Clone, Debug, PartialEq)]
pub struct CheapPath {
    pub cost: f64,
    /// Edges from `u` to `v`.
    pub edges: Vec<EdgeId>,
}

/// Cheapest `u`-`v` walk with at most `k` hops under `cost` (`None` = edge
/// unavailable), shortcut to a simple path. Costs must be non-negative, so the
/// shortcut never costs more than the walk.
pub(crate) fn cheapest_path(
    g: &Graph,
    u: NodeId,
    v: NodeId,
    k: usize,
    cost: impl Fn(EdgeId) -> Option<f64>,
) -> Option<CheapPath> {
    let n = g.n();
    let mut dist = vec![f64::INFINITY; n];
    dist[u] = 0.0;
    let mut frontier = vec![u];
    let mut on_frontier = vec![false; n];
    // parents[i][y]: last hop into y when layer i+1 improved it
    let mut parents: Vec<Vec<Option<(NodeId, EdgeId)>>> = Vec::with_capacity(k);
    for _ in 0..k {
        let prev = dist.clone();
        let mut parent = vec![None; n];
        let mut next = Vec::new();
        for &x in &frontier {
            for &(y, e) in g.neighbors(x) {
                let Some(c) = cost(e) else { continue };
                let nd = prev[x] + c;
                if nd < dist[y] {
                    dist[y] = nd;
                    parent[y] = Some((x, e));
                    if !on_frontier[y] {
                        on_frontier[y] = true;
                        next.push(y);
                    }
                }
            }
        }
        parents.push(parent);
        for &y in &next {
            on_frontier[y] = false;
        }
        if next.is_empty() {
            break;
        }
        frontier = next;
    }
    if !dist[v].is_finite() {
        return None;
    }

    let mut walk = Vec::new();
    let mut node = v;
    for parent in parents.iter().rev() {
        if let Some((x, e)) = parent[node] {
            walk.push((x, e));
            node = x;
        }
    }
    debug_assert_eq!(node, u);
    walk.reverse();
    Some(shortcut(g, u, &walk, &cost))
}

/// Removes closed sub-walks so every node appears once.
fn shortcut(
    g: &Graph,
    u: NodeId,
    walk: &[(NodeId, EdgeId)],
    cost: &impl Fn(EdgeId) -> Option<f64>,
) -> CheapPath {
    let mut nodes = vec![u];
    let mut edges: Vec<EdgeId> = Vec::new();
    for &(tail, e) in walk {
        let head = g.edge(e).other(tail);
        match nodes.iter().position(|&x| x == head) {
            Some(pos) => {
                nodes.truncate(pos + 1);
                edges.truncate(pos);
            }
            None => {
                nodes.push(head);
                edges.push(e);
            }
        }
    }
    let total = edges.iter().map(|&e| cost(e).unwrap_or(0.0)).sum();
    CheapPath { cost: total, edges }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn respects_hop_bound_and_costs() {
        // square 0-1-2-3-0 plus chord 0-2
        let g = Graph::from_unweighted(4, [(0, 1), (1, 2), (2, 3), (3, 0), (0, 2)]).unwrap();
        let unit = |_| Some(1.0);
        assert_eq!(cheapest_path(&g, 0, 2, 2, unit).unwrap().edges, vec![4]);
        let avoid_chord = |e| (e != 4).then_some(1.0);
        let p = cheapest_path(&g, 0, 2, 2, avoid_chord).unwrap();
        assert_eq!(p.cost, 2.0);
        assert!(cheapest_path(&g, 0, 2, 1, avoid_chord).is_none());
        // zero-cost detour beats the direct chord
        let cheap_detour = |e| Some(if e == 4 { 1.0 } else { 0.0 });
        let p = cheapest_path(&g, 0, 2, 2, cheap_detour).unwrap();
        assert_eq!(p.cost, 0.0);
        assert_eq!(p.edges.len(), 2);
    }

    #[test]
    fn shortcut_drops_loops() {
        // the zero-cost walk 0-1-0-2 would repeat node 0
        let g = Graph::from_unweighted(3, [(0, 1), (0, 2)]).unwrap();
        let walk = [(0, 0), (1, 0), (0, 1)];
        let p = shortcut(&g, 0, &walk, &|_| Some(1.0));
        assert_eq!(p.edges, vec![1]);
        assert_eq!(p.cost, 1.0);
    }
}
