//! Undirected weighted graphs with stable edge ids.

mod conductance;
mod fault_set;
mod io;
mod paths;

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

pub use conductance::{
    conductance_bruteforce, conductance_spectral_lower_bound, cut_conductance, min_conductance_cut,
    spectral_sweep, SpectralSweep, BRUTEFORCE_MAX_NODES,
};
pub use fault_set::FaultSet;
pub use io::{parse_edge_list, parse_fault_file, write_edge_list, write_fault_file};
pub use paths::{
    bounded_dist, component_labels, components, girth, hop_dist_within, hop_distances,
    hop_limited_reachable, order_edges, same_partition, shortest_dist, EdgeMask, EdgeOrder,
    NoEdges, UNREACHABLE,
};

pub type NodeId = usize;
pub type EdgeId = usize;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Edge {
    /// Smaller endpoint.
    pub u: NodeId,
    /// Larger endpoint.
    pub v: NodeId,
    pub w: f64,
}

impl Edge {
    pub fn other(&self, x: NodeId) -> NodeId {
        if x == self.u {
            self.v
        } else {
            self.u
        }
    }

    pub fn touches(&self, x: NodeId) -> bool {
        self.u == x || self.v == x
    }
}

/// A simple undirected graph.
///
/// Edges keep the id they were inserted with; endpoints are stored with
/// `u < v`. `ext_degree` models boundary self-loops: it adds to a node's
/// volume but never carries a path.
#[derive(Clone, Debug, Default)]
pub struct Graph {
    n: usize,
    edges: Vec<Edge>,
    adj: Vec<Vec<(NodeId, EdgeId)>>,
    ext_degree: Vec<u64>,
    lookup: HashMap<(NodeId, NodeId), EdgeId>,
}

/// Subgraph on the same node set, with edge ids renumbered.
#[derive(Clone, Debug)]
pub struct EdgeSubgraph {
    pub graph: Graph,
    /// `parent_edge[i]` is the host id of local edge `i`.
    pub parent_edge: Vec<EdgeId>,
}

/// Induced subgraph with local node and edge ids.
#[derive(Clone, Debug)]
pub struct InducedSubgraph {
    pub graph: Graph,
    /// Local node id -> host node id.
    pub nodes: Vec<NodeId>,
    /// Local edge id -> host edge id.
    pub parent_edge: Vec<EdgeId>,
}

impl Graph {
    pub fn new(n: usize) -> Self {
        Self {
            n,
            edges: Vec::new(),
            adj: vec![Vec::new(); n],
            ext_degree: vec![0; n],
            lookup: HashMap::new(),
        }
    }

    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (NodeId, NodeId, f64)>,
    {
        let mut g = Self::new(n);
        for (u, v, w) in edges {
            g.add_edge(u, v, w)?;
        }
        Ok(g)
    }

    pub fn from_unweighted<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (NodeId, NodeId)>,
    {
        Self::from_edges(n, edges.into_iter().map(|(u, v)| (u, v, 1.0)))
    }

    pub fn add_edge(&mut self, u: NodeId, v: NodeId, w: f64) -> Result<EdgeId> {
        self.check_node(u)?;
        self.check_node(v)?;
        if u == v {
            return Err(Error::SelfLoop(u));
        }
        if !w.is_finite() || w < 0.0 {
            return Err(Error::InvalidWeight(w));
        }
        let (a, b) = if u < v { (u, v) } else { (v, u) };
        if self.lookup.contains_key(&(a, b)) {
            return Err(Error::DuplicateEdge(a, b));
        }
        let id = self.edges.len();
        self.edges.push(Edge { u: a, v: b, w });
        self.adj[a].push((b, id));
        self.adj[b].push((a, id));
        self.lookup.insert((a, b), id);
        Ok(id)
    }

    pub fn set_ext_degree(&mut self, x: NodeId, value: u64) -> Result<()> {
        self.check_node(x)?;
        self.ext_degree[x] = value;
        Ok(())
    }

    pub fn check_node(&self, x: NodeId) -> Result<()> {
        if x < self.n {
            Ok(())
        } else {
            Err(Error::NodeOutOfRange { node: x, n: self.n })
        }
    }

    pub fn check_edge(&self, e: EdgeId) -> Result<()> {
        if e < self.edges.len() {
            Ok(())
        } else {
            Err(Error::EdgeOutOfRange {
                edge: e,
                m: self.edges.len(),
            })
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn edge(&self, e: EdgeId) -> &Edge {
        &self.edges[e]
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn neighbors(&self, x: NodeId) -> &[(NodeId, EdgeId)] {
        &self.adj[x]
    }

    pub fn degree(&self, x: NodeId) -> usize {
        self.adj[x].len()
    }

    pub fn ext_degree(&self, x: NodeId) -> u64 {
        self.ext_degree[x]
    }

    /// Degree weighting used for volumes: incident edges plus boundary loops.
    pub fn volume_weight(&self, x: NodeId) -> u64 {
        self.adj[x].len() as u64 + self.ext_degree[x]
    }

    pub fn min_degree(&self) -> usize {
        (0..self.n).map(|x| self.degree(x)).min().unwrap_or(0)
    }

    pub fn max_degree(&self) -> usize {
        (0..self.n).map(|x| self.degree(x)).max().unwrap_or(0)
    }

    pub fn find_edge(&self, u: NodeId, v: NodeId) -> Option<EdgeId> {
        let key = if u < v { (u, v) } else { (v, u) };
        self.lookup.get(&key).copied()
    }

    pub fn is_unweighted(&self) -> bool {
        self.edges.iter().all(|e| e.w == 1.0)
    }

    /// Same nodes (and `ext_degree`), only the listed edges.
    pub fn edge_subgraph(&self, ids: &[EdgeId]) -> Result<EdgeSubgraph> {
        let mut graph = Self::new(self.n);
        graph.ext_degree.clone_from(&self.ext_degree);
        for &e in ids {
            self.check_edge(e).map_err(|_| Error::NotASubgraph(e))?;
            let edge = self.edges[e];
            graph.add_edge(edge.u, edge.v, edge.w)?;
        }
        Ok(EdgeSubgraph {
            graph,
            parent_edge: ids.to_vec(),
        })
    }

    /// Graph with the masked edges dropped; nodes and `ext_degree` unchanged.
    pub fn without<M: EdgeMask + ?Sized>(&self, removed: &M) -> Graph {
        let mut graph = Self::new(self.n);
        graph.ext_degree.clone_from(&self.ext_degree);
        for (id, e) in self.edges.iter().enumerate() {
            if !removed.is_removed(id) {
                graph
                    .add_edge(e.u, e.v, e.w)
                    .expect("edges of a valid graph stay valid");
            }
        }
        graph
    }

    /// Subgraph induced by `nodes`. Each local node's `ext_degree` is its
    /// host `ext_degree` plus the number of host edges leaving `nodes`.
    pub fn induced(&self, nodes: &[NodeId]) -> Result<InducedSubgraph> {
        let mut local = vec![usize::MAX; self.n];
        for (i, &x) in nodes.iter().enumerate() {
            self.check_node(x)?;
            if local[x] != usize::MAX {
                return Err(Error::InvalidParameter(format!("node {x} listed twice")));
            }
            local[x] = i;
        }
        let mut graph = Self::new(nodes.len());
        let mut parent_edge = Vec::new();
        for (i, &x) in nodes.iter().enumerate() {
            let mut boundary = 0u64;
            for &(y, e) in &self.adj[x] {
                if local[y] == usize::MAX {
                    boundary += 1;
                } else if x < y {
                    graph.add_edge(i, local[y], self.edges[e].w)?;
                    parent_edge.push(e);
                }
            }
            graph.ext_degree[i] = self.ext_degree[x] + boundary;
        }
        Ok(InducedSubgraph {
            graph,
            nodes: nodes.to_vec(),
            parent_edge,
        })
    }

    /// Total volume `Σ (deg + ext)`.
    pub fn total_volume(&self) -> u64 {
        (0..self.n).map(|x| self.volume_weight(x)).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_invalid_edges() {
        let mut g = Graph::new(3);
        assert!(matches!(g.add_edge(0, 0, 1.0), Err(Error::SelfLoop(0))));
        assert!(matches!(
            g.add_edge(0, 3, 1.0),
            Err(Error::NodeOutOfRange { .. })
        ));
        assert!(matches!(
            g.add_edge(0, 1, -1.0),
            Err(Error::InvalidWeight(_))
        ));
        assert!(matches!(
            g.add_edge(0, 1, f64::NAN),
            Err(Error::InvalidWeight(_))
        ));
        g.add_edge(1, 0, 2.0).unwrap();
        assert!(matches!(
            g.add_edge(0, 1, 1.0),
            Err(Error::DuplicateEdge(0, 1))
        ));
        assert_eq!(g.edge(0).u, 0);
        assert_eq!(g.edge(0).v, 1);
    }

    #[test]
    fn adjacency_matches_edge_list() {
        let g = Graph::from_unweighted(4, [(0, 1), (1, 2), (2, 3), (3, 0), (0, 2)]).unwrap();
        for x in 0..g.n() {
            for &(y, e) in g.neighbors(x) {
                assert!(g.edge(e).touches(x));
                assert_eq!(g.edge(e).other(x), y);
            }
        }
        let total: usize = (0..g.n()).map(|x| g.degree(x)).sum();
        assert_eq!(total, 2 * g.m());
    }

    #[test]
    fn induced_subgraph_counts_boundary_edges() {
        // square with a diagonal; keep {0, 1}
        let g = Graph::from_unweighted(4, [(0, 1), (1, 2), (2, 3), (3, 0), (0, 2)]).unwrap();
        let sub = g.induced(&[0, 1]).unwrap();
        assert_eq!(sub.graph.m(), 1);
        assert_eq!(sub.graph.ext_degree(0), 2);
        assert_eq!(sub.graph.ext_degree(1), 1);
        assert_eq!(sub.graph.volume_weight(0), g.degree(0) as u64);
    }
}
