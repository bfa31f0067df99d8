//! Fault sets of bounded faulty-degree, and checkers for the fault-tolerant
//! guarantees of a subgraph.
//!
//! Stretch is checked edge by edge: if every surviving edge `(u, v)` of `G∖F`
//! has `dist_{H∖F}(u, v) ≤ t·w(u, v)`, then every pair does, since a shortest
//! path in `G∖F` can be replaced edge by edge.

use std::ops::ControlFlow;

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::generators::{hypercube_coords, hypercube_edge_coord, shuffled};
use crate::graph::{
    bounded_dist, component_labels, hop_dist_within, shortest_dist, EdgeId, EdgeSubgraph, FaultSet,
    Graph, NodeId,
};
use crate::rng;
use crate::{Error, Result};

/// Largest edge count for exhaustive enumeration of fault sets.
pub const EXHAUSTIVE_MAX_EDGES: usize = 20;

/// Relative slack when comparing a distance against `t·w`.
const STRETCH_SLACK: f64 = 1e-9;

/// Random `f`-valid fault set: edges are visited in a seeded random order and
/// each is taken with probability `density` when both endpoints still have
/// fault-degree below `f`.
pub fn sample_fault_set(g: &Graph, f: u32, density: f64, seed: u64) -> FaultSet {
    let mut rng = rng::stream(seed, "fault-sample");
    let mut faults = FaultSet::empty(g);
    for e in shuffled(g.m(), &mut rng) {
        let take = rng.gen::<f64>() < density;
        let edge = g.edge(e);
        if take && faults.degree(edge.u) < f && faults.degree(edge.v) < f {
            faults.insert(g, e).expect("edge id from the graph");
        }
    }
    debug_assert!(faults.is_valid(f));
    faults
}

/// `count` independent samples from [`sample_fault_set`], seeds derived from
/// `seed`.
pub fn sample_fault_sets(
    g: &Graph,
    f: u32,
    density: f64,
    count: usize,
    seed: u64,
) -> Vec<FaultSet> {
    (0..count)
        .into_par_iter()
        .map(|i| {
            sample_fault_set(
                g,
                f,
                density,
                rng::derive_seed(seed, "fault-batch", i as u64),
            )
        })
        .collect()
}

/// For a blow-up with factor `f`, every edge between copies of base nodes
/// `u` and `v` except `(u_i, v_j)`.
pub fn adversarial_blowup_fault(
    g: &Graph,
    f: usize,
    base_edge: (NodeId, NodeId),
    i: usize,
    j: usize,
) -> Result<FaultSet> {
    if f == 0 || !g.n().is_multiple_of(f) {
        return Err(Error::InvalidParameter(format!(
            "{} nodes is not a blow-up with factor {f}",
            g.n()
        )));
    }
    if i >= f || j >= f {
        return Err(Error::InvalidParameter(format!(
            "copy index out of range [0, {f})"
        )));
    }
    let (u, v) = base_edge;
    let mut faults = FaultSet::empty(g);
    for a in 0..f {
        for b in 0..f {
            let e = g
                .find_edge(u * f + a, v * f + b)
                .ok_or(Error::MissingEdge(u, v))?;
            if a != i || b != j {
                faults.insert(g, e)?;
            }
        }
    }
    debug_assert!(faults.is_valid(f as u32));
    Ok(faults)
}

/// For the generalized hypercube `[f]^d`, every edge along coordinate
/// `coord` except `kept_edge`.
pub fn adversarial_hypercube_fault(
    g: &Graph,
    f: usize,
    d: usize,
    coord: usize,
    kept_edge: (NodeId, NodeId),
) -> Result<FaultSet> {
    if g.n() != f.checked_pow(d as u32).unwrap_or(0) {
        return Err(Error::InvalidParameter(format!(
            "{} nodes is not [{f}]^{d}",
            g.n()
        )));
    }
    let (ku, kv) = kept_edge;
    let kept = g.find_edge(ku, kv).ok_or(Error::MissingEdge(ku, kv))?;
    if hypercube_edge_coord(f, d, ku, kv) != Some(coord) {
        return Err(Error::InvalidParameter(format!(
            "edge ({ku}, {kv}) does not run along coordinate {coord}"
        )));
    }
    let mut faults = FaultSet::empty(g);
    for (id, e) in g.edges().iter().enumerate() {
        if id != kept && hypercube_edge_coord(f, d, e.u, e.v) == Some(coord) {
            faults.insert(g, id)?;
        }
    }
    debug_assert!(faults.is_valid(f as u32 - 1));
    Ok(faults)
}

/// The adversarial set of every edge of a blow-up, keyed by that edge.
pub fn blowup_adversarial_sets(g: &Graph, f: usize) -> Result<Vec<(EdgeId, FaultSet)>> {
    g.edges()
        .iter()
        .enumerate()
        .map(|(id, e)| {
            let fs = adversarial_blowup_fault(g, f, (e.u / f, e.v / f), e.u % f, e.v % f)?;
            Ok((id, fs))
        })
        .collect()
}

/// The adversarial set of every edge of `[f]^d`, keyed by that edge.
pub fn hypercube_adversarial_sets(
    g: &Graph,
    f: usize,
    d: usize,
) -> Result<Vec<(EdgeId, FaultSet)>> {
    g.edges()
        .iter()
        .enumerate()
        .map(|(id, e)| {
            let coord = hypercube_edge_coord(f, d, e.u, e.v).ok_or_else(|| {
                Error::InvalidParameter(format!(
                    "edge ({}, {}) is not a hypercube edge: {:?} vs {:?}",
                    e.u,
                    e.v,
                    hypercube_coords(f, d, e.u),
                    hypercube_coords(f, d, e.v)
                ))
            })?;
            Ok((id, adversarial_hypercube_fault(g, f, d, coord, (e.u, e.v))?))
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StretchViolation {
    /// Index into the list of fault sets that was checked.
    pub fault_index: usize,
    pub edge: EdgeId,
    /// `dist_{H∖F}(u, v) / w(u, v)`; infinite when disconnected.
    pub ratio: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct SpannerCheck {
    pub num_faultsets: usize,
    pub violations: Vec<StretchViolation>,
    /// Largest `dist_{H∖F}(u, v) / w(u, v)` over all checked surviving edges.
    pub worst_ratio: f64,
}

impl SpannerCheck {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConnectivityViolation {
    pub fault_index: usize,
    /// A surviving input edge whose endpoints are separated in `H∖F`.
    pub edge: EdgeId,
}

#[derive(Clone, Debug, Serialize)]
pub struct CertificateCheck {
    pub num_faultsets: usize,
    pub violations: Vec<ConnectivityViolation>,
}

impl CertificateCheck {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// A subgraph prepared for repeated checks against fault sets of its host.
struct Prepared<'a> {
    g: &'a Graph,
    h: EdgeSubgraph,
    in_h: Vec<bool>,
    unit: bool,
}

impl<'a> Prepared<'a> {
    fn new(g: &'a Graph, h: &[EdgeId]) -> Result<Self> {
        let mut in_h = vec![false; g.m()];
        for &e in h {
            if e >= g.m() {
                return Err(Error::NotASubgraph(e));
            }
            in_h[e] = true;
        }
        let ids: Vec<EdgeId> = (0..g.m()).filter(|&e| in_h[e]).collect();
        Ok(Self {
            g,
            h: g.edge_subgraph(&ids)?,
            in_h,
            unit: g.is_unweighted(),
        })
    }

    fn local_mask(&self, faults: &FaultSet) -> Vec<bool> {
        self.h
            .parent_edge
            .iter()
            .map(|&e| faults.contains(e))
            .collect()
    }

    /// Ratio for one surviving edge, and whether it is within stretch `t`.
    fn edge_ratio(&self, mask: &[bool], e: EdgeId, t: f64) -> (f64, bool) {
        let edge = self.g.edge(e);
        let hg = &self.h.graph;
        let ratio_of = |d: f64| {
            if edge.w > 0.0 {
                d / edge.w
            } else if d == 0.0 {
                1.0
            } else {
                f64::INFINITY
            }
        };
        if self.in_h[e] && self.unit {
            return (1.0, true);
        }
        let limit = t * edge.w * (1.0 + STRETCH_SLACK);
        let within = if self.unit {
            hop_dist_within(hg, mask, edge.u, edge.v, limit.floor() as usize).map(|d| d as f64)
        } else {
            bounded_dist(hg, mask, edge.u, edge.v, limit)
        };
        match within {
            Some(d) => (ratio_of(d), true),
            None => (ratio_of(shortest_dist(hg, mask, edge.u, edge.v)), false),
        }
    }

    /// First violating edge of `G∖F`, if any.
    fn first_violation(&self, faults: &FaultSet, t: f64) -> Option<(EdgeId, f64)> {
        let mask = self.local_mask(faults);
        (0..self.g.m())
            .filter(|&e| !faults.contains(e) && !self.in_h[e])
            .find_map(|e| {
                let (ratio, ok) = self.edge_ratio(&mask, e, t);
                (!ok).then_some((e, ratio))
            })
    }
}

/// Checks `dist_{H∖F}(u, v) ≤ t·w(u, v)` for every edge of `G∖F`, for each
/// fault set in `faults`. Fault sets are checked in parallel.
pub fn verify_spanner(
    g: &Graph,
    h: &[EdgeId],
    t: f64,
    faults: &[FaultSet],
) -> Result<SpannerCheck> {
    let prep = Prepared::new(g, h)?;
    let per_set: Vec<(Vec<StretchViolation>, f64)> = faults
        .par_iter()
        .enumerate()
        .map(|(fault_index, fs)| {
            let mask = prep.local_mask(fs);
            let mut worst: f64 = 0.0;
            let mut violations = Vec::new();
            for e in (0..g.m()).filter(|&e| !fs.contains(e)) {
                let (ratio, ok) = prep.edge_ratio(&mask, e, t);
                worst = worst.max(ratio);
                if !ok {
                    violations.push(StretchViolation {
                        fault_index,
                        edge: e,
                        ratio,
                    });
                }
            }
            (violations, worst)
        })
        .collect();
    let mut out = SpannerCheck {
        num_faultsets: faults.len(),
        violations: Vec::new(),
        worst_ratio: 0.0,
    };
    for (v, w) in per_set {
        out.violations.extend(v);
        out.worst_ratio = out.worst_ratio.max(w);
    }
    Ok(out)
}

/// Checks that `G∖F` and `H∖F` have the same connected components, for each
/// fault set in `faults`.
pub fn verify_certificate(
    g: &Graph,
    h: &[EdgeId],
    faults: &[FaultSet],
) -> Result<CertificateCheck> {
    let prep = Prepared::new(g, h)?;
    let violations: Vec<ConnectivityViolation> = faults
        .par_iter()
        .enumerate()
        .filter_map(|(fault_index, fs)| {
            let mask = prep.local_mask(fs);
            let in_g = component_labels(g, fs);
            let in_h = component_labels(&prep.h.graph, &mask);
            if in_g == in_h {
                return None;
            }
            // H∖F refines G∖F, so some surviving edge crosses H-components.
            let edge = (0..g.m())
                .find(|&e| {
                    let edge = g.edge(e);
                    !fs.contains(e) && in_h[edge.u] != in_h[edge.v]
                })
                .expect("refinement implies a crossing edge");
            Some(ConnectivityViolation { fault_index, edge })
        })
        .collect();
    Ok(CertificateCheck {
        num_faultsets: faults.len(),
        violations,
    })
}

/// Calls `visit` on every fault set of `g` with faulty-degree at most `f`
/// (including the empty set), stopping early on `Break`.
pub fn for_each_valid_fault_set<B>(
    g: &Graph,
    f: u32,
    mut visit: impl FnMut(&FaultSet) -> ControlFlow<B>,
) -> Option<B> {
    fn rec<B>(
        g: &Graph,
        f: u32,
        next: EdgeId,
        current: &mut FaultSet,
        visit: &mut impl FnMut(&FaultSet) -> ControlFlow<B>,
    ) -> ControlFlow<B> {
        if next == g.m() {
            return visit(current);
        }
        rec(g, f, next + 1, current, visit)?;
        let e = g.edge(next);
        if current.degree(e.u) < f && current.degree(e.v) < f {
            current.insert(g, next).expect("edge in range");
            let flow = rec(g, f, next + 1, current, visit);
            current.remove(g, next);
            flow?;
        }
        ControlFlow::Continue(())
    }
    let mut current = FaultSet::empty(g);
    match rec(g, f, 0, &mut current, &mut visit) {
        ControlFlow::Break(b) => Some(b),
        ControlFlow::Continue(()) => None,
    }
}

/// A fault set together with an edge it breaks.
#[derive(Clone, Debug)]
pub struct Counterexample {
    pub faults: FaultSet,
    pub edge: EdgeId,
    pub ratio: f64,
}

/// Exhaustive search over all `f`-valid fault sets for one that breaks the
/// stretch-`t` guarantee of `h`. Limited to `m ≤ 20`.
pub fn find_spanner_counterexample(
    g: &Graph,
    h: &[EdgeId],
    t: f64,
    f: u32,
) -> Result<Option<Counterexample>> {
    if g.m() > EXHAUSTIVE_MAX_EDGES {
        return Err(Error::TooLarge {
            what: "graph for exhaustive verification",
            size: g.m(),
            limit: EXHAUSTIVE_MAX_EDGES,
        });
    }
    let prep = Prepared::new(g, h)?;
    Ok(for_each_valid_fault_set(g, f, |fs| {
        match prep.first_violation(fs, t) {
            Some((edge, ratio)) => ControlFlow::Break(Counterexample {
                faults: fs.clone(),
                edge,
                ratio,
            }),
            None => ControlFlow::Continue(()),
        }
    }))
}

/// True iff no `f`-valid fault set breaks the stretch-`t` guarantee of `h`.
pub fn bruteforce_verify_spanner_small(g: &Graph, h: &[EdgeId], t: f64, f: u32) -> Result<bool> {
    Ok(find_spanner_counterexample(g, h, t, f)?.is_none())
}
