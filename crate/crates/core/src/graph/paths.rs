use std::cmp::Ordering;
use std::collections::{BinaryHeap, VecDeque};

use super::{EdgeId, Graph, NodeId};

/// Marks edges that are treated as absent by traversal routines.
pub trait EdgeMask {
    fn is_removed(&self, e: EdgeId) -> bool;
}

/// Mask that removes nothing.
#[derive(Clone, Copy, Debug, Default)]
pub struct NoEdges;

impl EdgeMask for NoEdges {
    fn is_removed(&self, _: EdgeId) -> bool {
        false
    }
}

impl EdgeMask for [bool] {
    fn is_removed(&self, e: EdgeId) -> bool {
        self[e]
    }
}

impl EdgeMask for Vec<bool> {
    fn is_removed(&self, e: EdgeId) -> bool {
        self[e]
    }
}

/// Hop distance of an unreachable node.
pub const UNREACHABLE: usize = usize::MAX;

#[derive(PartialEq)]
struct Entry {
    dist: f64,
    node: NodeId,
}

impl Eq for Entry {}

impl Ord for Entry {
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .dist
            .total_cmp(&self.dist)
            .then_with(|| other.node.cmp(&self.node))
    }
}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Weighted `u`-`v` distance with masked edges removed; `f64::INFINITY` when
/// disconnected.
pub fn shortest_dist<M: EdgeMask + ?Sized>(g: &Graph, excluded: &M, u: NodeId, v: NodeId) -> f64 {
    bounded_dist(g, excluded, u, v, f64::INFINITY).unwrap_or(f64::INFINITY)
}

/// Dijkstra that gives up once every remaining label exceeds `limit`.
/// Returns the distance if it is at most `limit`.
pub fn bounded_dist<M: EdgeMask + ?Sized>(
    g: &Graph,
    excluded: &M,
    u: NodeId,
    v: NodeId,
    limit: f64,
) -> Option<f64> {
    if u == v {
        return Some(0.0);
    }
    let mut dist = vec![f64::INFINITY; g.n()];
    let mut heap = BinaryHeap::new();
    dist[u] = 0.0;
    heap.push(Entry { dist: 0.0, node: u });
    while let Some(Entry { dist: d, node: x }) = heap.pop() {
        if d > dist[x] {
            continue;
        }
        if x == v {
            return Some(d);
        }
        for &(y, e) in g.neighbors(x) {
            if excluded.is_removed(e) {
                continue;
            }
            let nd = d + g.edge(e).w;
            if nd <= limit && nd < dist[y] {
                dist[y] = nd;
                heap.push(Entry { dist: nd, node: y });
            }
        }
    }
    None
}

/// BFS hop distances from `source`; [`UNREACHABLE`] marks unreachable nodes.
pub fn hop_distances<M: EdgeMask + ?Sized>(g: &Graph, excluded: &M, source: NodeId) -> Vec<usize> {
    let mut dist = vec![UNREACHABLE; g.n()];
    let mut queue = VecDeque::new();
    dist[source] = 0;
    queue.push_back(source);
    while let Some(x) = queue.pop_front() {
        for &(y, e) in g.neighbors(x) {
            if !excluded.is_removed(e) && dist[y] == UNREACHABLE {
                dist[y] = dist[x] + 1;
                queue.push_back(y);
            }
        }
    }
    dist
}

/// Hop distance from `u` to `v` if it is at most `hops`.
pub fn hop_dist_within<M: EdgeMask + ?Sized>(
    g: &Graph,
    excluded: &M,
    u: NodeId,
    v: NodeId,
    hops: usize,
) -> Option<usize> {
    if u == v {
        return Some(0);
    }
    let mut dist = vec![UNREACHABLE; g.n()];
    let mut queue = VecDeque::new();
    dist[u] = 0;
    queue.push_back(u);
    while let Some(x) = queue.pop_front() {
        if dist[x] >= hops {
            break;
        }
        for &(y, e) in g.neighbors(x) {
            if excluded.is_removed(e) || dist[y] != UNREACHABLE {
                continue;
            }
            dist[y] = dist[x] + 1;
            if y == v {
                return Some(dist[y]);
            }
            queue.push_back(y);
        }
    }
    None
}

/// Whether some `u`-`v` path with at most `hops` edges avoids `excluded`.
pub fn hop_limited_reachable<M: EdgeMask + ?Sized>(
    g: &Graph,
    excluded: &M,
    u: NodeId,
    v: NodeId,
    hops: usize,
) -> bool {
    hop_dist_within(g, excluded, u, v, hops).is_some()
}

/// Component index per node; components are numbered by their smallest node.
pub fn component_labels<M: EdgeMask + ?Sized>(g: &Graph, excluded: &M) -> Vec<usize> {
    let mut label = vec![usize::MAX; g.n()];
    let mut next = 0;
    let mut stack = Vec::new();
    for s in 0..g.n() {
        if label[s] != usize::MAX {
            continue;
        }
        label[s] = next;
        stack.push(s);
        while let Some(x) = stack.pop() {
            for &(y, e) in g.neighbors(x) {
                if !excluded.is_removed(e) && label[y] == usize::MAX {
                    label[y] = next;
                    stack.push(y);
                }
            }
        }
        next += 1;
    }
    label
}

/// Connected components, each sorted, ordered by smallest member.
pub fn components<M: EdgeMask + ?Sized>(g: &Graph, excluded: &M) -> Vec<Vec<NodeId>> {
    let labels = component_labels(g, excluded);
    let count = labels.iter().copied().max().map_or(0, |m| m + 1);
    let mut out = vec![Vec::new(); count];
    for (x, &l) in labels.iter().enumerate() {
        out[l].push(x);
    }
    out
}

/// Canonical labelings from [`component_labels`] describe the same partition
/// exactly when they are equal.
pub fn same_partition(a: &[usize], b: &[usize]) -> bool {
    a == b
}

/// Total order on edge ids: weight, then smaller endpoint, larger endpoint, id.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeOrder(Vec<EdgeId>);

impl EdgeOrder {
    pub fn as_slice(&self) -> &[EdgeId] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<EdgeId> {
        self.0
    }

    /// `rank[e]` is the position of edge `e`.
    pub fn ranks(&self) -> Vec<usize> {
        let mut rank = vec![0; self.0.len()];
        for (i, &e) in self.0.iter().enumerate() {
            rank[e] = i;
        }
        rank
    }
}

pub fn order_edges(g: &Graph) -> EdgeOrder {
    let mut ids: Vec<EdgeId> = (0..g.m()).collect();
    ids.sort_by(|&a, &b| {
        let (ea, eb) = (g.edge(a), g.edge(b));
        ea.w.total_cmp(&eb.w)
            .then(ea.u.cmp(&eb.u))
            .then(ea.v.cmp(&eb.v))
            .then(a.cmp(&b))
    });
    EdgeOrder(ids)
}

/// Length of a shortest cycle (in edges), ignoring weights; `None` if acyclic.
pub fn girth(g: &Graph) -> Option<usize> {
    let mut best = usize::MAX;
    let mut dist = vec![UNREACHABLE; g.n()];
    let mut via = vec![usize::MAX; g.n()];
    let mut queue = VecDeque::new();
    for s in 0..g.n() {
        dist.fill(UNREACHABLE);
        dist[s] = 0;
        queue.clear();
        queue.push_back(s);
        while let Some(x) = queue.pop_front() {
            if 2 * dist[x] + 1 >= best {
                break;
            }
            for &(y, e) in g.neighbors(x) {
                if e == via[x] && x != s {
                    continue;
                }
                if dist[y] == UNREACHABLE {
                    dist[y] = dist[x] + 1;
                    via[y] = e;
                    queue.push_back(y);
                } else {
                    best = best.min(dist[x] + dist[y] + 1);
                }
            }
        }
    }
    (best != usize::MAX).then_some(best)
}
