//! Expander decomposition by recursive bipartitioning.
//!
//! Small pieces are cut exactly, larger ones along the spectral sweep. A piece
//! becomes a cluster once its conductance (volumes include the edges leaving
//! it) is certified to be at least the target.

use log::debug;
use serde::Serialize;

use crate::graph::{
    component_labels, min_conductance_cut, spectral_sweep, EdgeId, Graph, InducedSubgraph, NoEdges,
    NodeId, BRUTEFORCE_MAX_NODES,
};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Certification {
    Singleton,
    /// Exhaustive minimum over all cuts.
    Exact,
    /// Cheeger bound `λ₂/2`.
    Spectral,
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct ClusterCertificate {
    /// Certified lower bound on the cluster's conductance.
    pub conductance: f64,
    pub method: Certification,
}

#[derive(Clone, Debug)]
pub struct Decomposition {
    /// Sorted node lists, ordered by smallest member.
    pub clusters: Vec<Vec<NodeId>>,
    pub phi_target: f64,
    /// Host edges whose endpoints lie in different clusters, ascending.
    pub cut_edges: Vec<EdgeId>,
    /// Induced views; `ext_degree` counts the host edges leaving the cluster.
    pub views: Vec<InducedSubgraph>,
    pub certificates: Vec<ClusterCertificate>,
}

impl Decomposition {
    /// Cluster index of every node.
    pub fn labels(&self, n: usize) -> Vec<usize> {
        let mut label = vec![usize::MAX; n];
        for (i, c) in self.clusters.iter().enumerate() {
            for &x in c {
                label[x] = i;
            }
        }
        label
    }
}

enum Step {
    Done(ClusterCertificate),
    Split(Vec<Vec<NodeId>>),
}

fn examine(view: &InducedSubgraph, phi: f64) -> Result<Step> {
    let h = &view.graph;
    let n = h.n();
    if n == 1 {
        return Ok(Step::Done(ClusterCertificate {
            conductance: 1.0,
            method: Certification::Singleton,
        }));
    }
    let labels = component_labels(h, &NoEdges);
    let parts = labels.iter().max().map_or(0, |&l| l + 1);
    if parts > 1 {
        let mut comps = vec![Vec::new(); parts];
        for (x, &l) in labels.iter().enumerate() {
            comps[l].push(view.nodes[x]);
        }
        return Ok(Step::Split(comps));
    }

    let (cert, side) = if n <= BRUTEFORCE_MAX_NODES {
        let (value, side) = min_conductance_cut(h)?;
        (
            ClusterCertificate {
                conductance: value,
                method: Certification::Exact,
            },
            side,
        )
    } else {
        let sweep = spectral_sweep(h)?;
        (
            ClusterCertificate {
                conductance: sweep.lambda2 / 2.0,
                method: Certification::Spectral,
            },
            sweep.side,
        )
    };
    if cert.conductance >= phi {
        return Ok(Step::Done(cert));
    }
    // the spectral bound can miss phi while the sweep cut itself does not;
    // splitting anyway keeps every cluster certified
    let mut inside = vec![false; n];
    for &x in &side {
        inside[x] = true;
    }
    let (a, b): (Vec<usize>, Vec<usize>) = (0..n).partition(|&x| inside[x]);
    if a.is_empty() || b.is_empty() {
        return Err(Error::Eigen(format!("degenerate cut of a {n}-node piece")));
    }
    let lift = |s: Vec<usize>| s.into_iter().map(|x| view.nodes[x]).collect();
    Ok(Step::Split(vec![lift(a), lift(b)]))
}

/// Partitions the nodes of `g` into clusters of certified conductance at
/// least `phi`. Deterministic.
pub fn expander_decompose(g: &Graph, phi: f64) -> Result<Decomposition> {
    if !(phi > 0.0 && phi < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "phi must lie in (0, 1), got {phi}"
        )));
    }
    let mut done: Vec<(Vec<NodeId>, ClusterCertificate)> = Vec::new();
    let mut stack: Vec<Vec<NodeId>> = if g.n() == 0 {
        Vec::new()
    } else {
        vec![(0..g.n()).collect()]
    };
    while let Some(mut piece) = stack.pop() {
        piece.sort_unstable();
        let view = g.induced(&piece)?;
        match examine(&view, phi)? {
            Step::Done(cert) => done.push((piece, cert)),
            Step::Split(parts) => stack.extend(parts),
        }
    }
    done.sort_by_key(|(c, _)| c[0]);

    let (clusters, certificates): (Vec<_>, Vec<_>) = done.into_iter().unzip();
    let views = clusters
        .iter()
        .map(|c| g.induced(c))
        .collect::<Result<Vec<_>>>()?;
    let mut out = Decomposition {
        clusters,
        phi_target: phi,
        cut_edges: Vec::new(),
        views,
        certificates,
    };
    let label = out.labels(g.n());
    out.cut_edges = (0..g.m())
        .filter(|&e| label[g.edge(e).u] != label[g.edge(e).v])
        .collect();
    debug!(
        "decomposition: {} clusters, {} cut edges of {}",
        out.clusters.len(),
        out.cut_edges.len(),
        g.m()
    );
    Ok(out)
}
