use std::collections::BTreeSet;

use serde::{Serialize, Serializer};

use super::{EdgeId, EdgeMask, Graph, NodeId};
use crate::Result;

/// A set of failed edges of one particular graph, with per-node fault-degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FaultSet {
    edges: BTreeSet<EdgeId>,
    mask: Vec<bool>,
    degree: Vec<u32>,
}

impl FaultSet {
    pub fn empty(g: &Graph) -> Self {
        Self {
            edges: BTreeSet::new(),
            mask: vec![false; g.m()],
            degree: vec![0; g.n()],
        }
    }

    pub fn from_edges<I: IntoIterator<Item = EdgeId>>(g: &Graph, ids: I) -> Result<Self> {
        let mut fs = Self::empty(g);
        for e in ids {
            fs.insert(g, e)?;
        }
        Ok(fs)
    }

    /// Adds `e`; returns whether it was new.
    pub fn insert(&mut self, g: &Graph, e: EdgeId) -> Result<bool> {
        g.check_edge(e)?;
        if self.mask[e] {
            return Ok(false);
        }
        let edge = g.edge(e);
        self.mask[e] = true;
        self.edges.insert(e);
        self.degree[edge.u] += 1;
        self.degree[edge.v] += 1;
        Ok(true)
    }

    pub fn remove(&mut self, g: &Graph, e: EdgeId) -> bool {
        if e >= self.mask.len() || !self.mask[e] {
            return false;
        }
        let edge = g.edge(e);
        self.mask[e] = false;
        self.edges.remove(&e);
        self.degree[edge.u] -= 1;
        self.degree[edge.v] -= 1;
        true
    }

    pub fn contains(&self, e: EdgeId) -> bool {
        self.mask.get(e).copied().unwrap_or(false)
    }

    pub fn edges(&self) -> impl Iterator<Item = EdgeId> + '_ {
        self.edges.iter().copied()
    }

    pub fn to_vec(&self) -> Vec<EdgeId> {
        self.edges.iter().copied().collect()
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn degree(&self, x: NodeId) -> u32 {
        self.degree[x]
    }

    pub fn max_degree(&self) -> u32 {
        self.degree.iter().copied().max().unwrap_or(0)
    }

    /// True iff every node has fault-degree at most `f`.
    pub fn is_valid(&self, f: u32) -> bool {
        self.max_degree() <= f
    }

    pub fn mask(&self) -> &[bool] {
        &self.mask
    }

    /// Re-expresses this set in the id space of `sub`, whose local edge `i`
    /// is host edge `parent_edge[i]`. Faults outside `sub` are dropped.
    pub fn restrict_to(&self, sub: &Graph, parent_edge: &[EdgeId]) -> FaultSet {
        let mut out = FaultSet::empty(sub);
        for (local, &host) in parent_edge.iter().enumerate() {
            if self.contains(host) {
                out.insert(sub, local).expect("local id in range");
            }
        }
        out
    }
}

impl EdgeMask for FaultSet {
    fn is_removed(&self, e: EdgeId) -> bool {
        self.contains(e)
    }
}

impl Serialize for FaultSet {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.edges.iter())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degree_tracks_membership() {
        let g = Graph::from_unweighted(4, [(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        let mut f = FaultSet::from_edges(&g, [0, 1]).unwrap();
        assert_eq!(f.degree(1), 2);
        assert_eq!(f.max_degree(), 2);
        assert!(!f.is_valid(1));
        assert!(!f.insert(&g, 0).unwrap());
        assert!(f.remove(&g, 1));
        assert_eq!(f.degree(1), 1);
        assert_eq!(f.max_degree(), 1);
        assert!(f.insert(&g, 9).is_err());
    }
}
