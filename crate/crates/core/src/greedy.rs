//! Greedy fault-tolerant `(2k−1)`-spanners.
//!
//! Edges are scanned in [`order_edges`] order. An edge `(u, v)` is added when
//! some fault set of small faulty-degree destroys every `u`-`v` path of at
//! most `2k−1` hops in the spanner built so far; that fault set is recorded
//! as the edge's blocking witness. Since earlier edges are never heavier, the
//! hop test implies the weighted one.

use std::ops::ControlFlow;

use log::debug;
use serde::{Deserialize, Serialize};

use crate::graph::{hop_limited_reachable, order_edges, EdgeId, FaultSet, Graph, NoEdges};
use crate::lbc::lp::{lp_solve_capped, LpOutcome};
use crate::lbc::{
    common_neighbor_bound, greedy_hitting_cut, lbc_decide, lbc_round, relevant_universe,
    LbcInstance, RoundingParams, SearchLimits,
};
use crate::rng;
use crate::{Error, Result};

/// Largest spanner accepted by [`verify_blocking_set`].
pub const BLOCKING_CHECK_MAX_EDGES: usize = 50;

/// Blocking sets are kept by default up to this many input edges.
pub const BLOCKING_STORE_MAX_EDGES: usize = 10_000;

/// Witness fault set recorded for one spanner edge.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockingEntry {
    pub edge: EdgeId,
    pub fault_edges: Vec<EdgeId>,
}

/// One entry per spanner edge, in the order edges were added. Ids refer to
/// the input graph.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockingSet {
    pub entries: Vec<BlockingEntry>,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct GreedyStats {
    /// Edges whose endpoints were already more than `2k−1` hops apart.
    pub kept_far: usize,
    /// Edges kept on a cut of small enough faulty-degree.
    pub kept_cut: usize,
    /// Approximate mode only: kept because the LP optimum was at most `f`
    /// although no cut under the threshold was found.
    pub kept_lp: usize,
    pub discarded: usize,
    pub lp_solves: usize,
    /// Largest faulty-degree among recorded witnesses.
    pub max_witness_degree: u32,
}

#[derive(Clone, Debug, Serialize)]
pub struct GreedyOutput {
    /// Spanner edges (input ids) in the order they were added.
    pub edges: Vec<EdgeId>,
    pub blocking: Option<BlockingSet>,
    pub stats: GreedyStats,
}

#[derive(Clone, Copy, Debug)]
pub struct ExactOptions {
    pub limits: SearchLimits,
    pub store_blocking: bool,
}

impl ExactOptions {
    pub fn for_graph(g: &Graph) -> Self {
        Self {
            limits: SearchLimits {
                max_universe: 4096,
                max_nodes: 20_000_000,
            },
            store_blocking: g.m() <= BLOCKING_STORE_MAX_EDGES,
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct ApproxOptions {
    /// Keep threshold multiplier: an edge is kept when the rounded cut has
    /// faulty-degree at most `b·f·k·ln n`.
    pub b: f64,
    pub rounding: RoundingParams,
    pub seed: u64,
    pub store_blocking: bool,
}

impl ApproxOptions {
    pub fn for_graph(g: &Graph, b: f64, seed: u64) -> Self {
        Self {
            b,
            rounding: RoundingParams::default(),
            seed,
            store_blocking: g.m() <= BLOCKING_STORE_MAX_EDGES,
        }
    }
}

fn check_params(k: usize) -> Result<usize> {
    if k == 0 {
        return Err(Error::InvalidParameter("k must be at least 1".into()));
    }
    Ok(2 * k - 1)
}

/// Greedy state: the spanner as a graph on the same nodes, with its edges
/// mapped back to the input.
struct Growing<'a> {
    g: &'a Graph,
    h: Graph,
    to_input: Vec<EdgeId>,
    blocking: Option<BlockingSet>,
    stats: GreedyStats,
}

impl<'a> Growing<'a> {
    fn new(g: &'a Graph, store_blocking: bool) -> Self {
        Self {
            g,
            h: Graph::new(g.n()),
            to_input: Vec::new(),
            blocking: store_blocking.then(BlockingSet::default),
            stats: GreedyStats::default(),
        }
    }

    fn keep(&mut self, e: EdgeId, witness: &FaultSet) -> Result<()> {
        let edge = *self.g.edge(e);
        self.h.add_edge(edge.u, edge.v, edge.w)?;
        self.to_input.push(e);
        self.stats.max_witness_degree = self.stats.max_witness_degree.max(witness.max_degree());
        if let Some(bs) = &mut self.blocking {
            bs.entries.push(BlockingEntry {
                edge: e,
                fault_edges: witness.edges().map(|x| self.to_input[x]).collect(),
            });
        }
        Ok(())
    }

    fn finish(self) -> GreedyOutput {
        GreedyOutput {
            edges: self.to_input,
            blocking: self.blocking,
            stats: self.stats,
        }
    }
}

/// Exact greedy with default options.
pub fn greedy_fd_spanner_exact(g: &Graph, k: usize, f: u32) -> Result<GreedyOutput> {
    greedy_fd_spanner_exact_with(g, k, f, ExactOptions::for_graph(g))
}

/// Keeps an edge iff an exact search finds a fault set of faulty-degree at
/// most `f` cutting all short paths in the current spanner.
pub fn greedy_fd_spanner_exact_with(
    g: &Graph,
    k: usize,
    f: u32,
    opts: ExactOptions,
) -> Result<GreedyOutput> {
    let hops = check_params(k)?;
    let mut state = Growing::new(g, opts.store_blocking);
    for &e in order_edges(g).as_slice() {
        let edge = g.edge(e);
        let inst = LbcInstance::new(&state.h, edge.u, edge.v, hops)?;
        if !hop_limited_reachable(&state.h, &NoEdges, edge.u, edge.v, hops) {
            state.stats.kept_far += 1;
            let empty = FaultSet::empty(&state.h);
            state.keep(e, &empty)?;
            continue;
        }
        match lbc_decide(&inst, f, opts.limits)? {
            Some(witness) => {
                state.stats.kept_cut += 1;
                state.keep(e, &witness)?;
            }
            None => state.stats.discarded += 1,
        }
    }
    Ok(state.finish())
}

/// Approximate greedy with default rounding.
pub fn greedy_fd_spanner_approx(
    g: &Graph,
    k: usize,
    f: u32,
    b: f64,
    seed: u64,
) -> Result<GreedyOutput> {
    greedy_fd_spanner_approx_with(g, k, f, ApproxOptions::for_graph(g, b, seed))
}

/// Keeps an edge when a cut of faulty-degree at most `b·f·k·ln n` is found.
///
/// Cheap certificates are tried before the LP. A keep needs a valid cut under
/// the threshold: the cheaper star at `u` or `v`, a greedy hitting cut, or the
/// rounded LP. A discard needs a lower bound above `f` on the LP optimum:
/// common neighbors, the LP restricted to paths of at most 3 hops, or the full
/// LP. An edge whose full LP optimum is at most `f` is kept with the rounded
/// cut as witness. So every discarded edge has no fault set of faulty-degree `f`
/// separating its endpoints, and the output is always an `f`-fault-tolerant
/// `(2k−1)`-spanner.
pub fn greedy_fd_spanner_approx_with(
    g: &Graph,
    k: usize,
    f: u32,
    opts: ApproxOptions,
) -> Result<GreedyOutput> {
    let hops = check_params(k)?;
    if opts.b.is_nan() || opts.b <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "B must be positive, got {}",
            opts.b
        )));
    }
    let threshold = opts.b * f64::from(f) * k as f64 * (g.n().max(1) as f64).ln();
    let certified_above = |bound: f64| bound > f64::from(f) + 1e-6;
    let mut state = Growing::new(g, opts.store_blocking);
    for &e in order_edges(g).as_slice() {
        let edge = g.edge(e);
        if !hop_limited_reachable(&state.h, &NoEdges, edge.u, edge.v, hops) {
            state.stats.kept_far += 1;
            let empty = FaultSet::empty(&state.h);
            state.keep(e, &empty)?;
            continue;
        }
        let inst = LbcInstance::new(&state.h, edge.u, edge.v, hops)?;
        let star = star_cut(&inst)?;
        let cheap = if f64::from(star.max_degree()) <= threshold {
            star
        } else {
            let hitting = greedy_hitting_cut(&inst);
            if hitting.max_degree() < star.max_degree() {
                hitting
            } else {
                star
            }
        };
        if f64::from(cheap.max_degree()) <= threshold {
            state.stats.kept_cut += 1;
            state.keep(e, &cheap)?;
            continue;
        }
        if certified_above(common_neighbor_bound(&inst)) {
            state.stats.discarded += 1;
            continue;
        }
        if hops > 3 {
            let short = LbcInstance::new(&state.h, edge.u, edge.v, 3)?;
            state.stats.lp_solves += 1;
            let bound = match lp_solve_capped(&short, f64::from(f) + 1e-6)? {
                LpOutcome::Above { lower_bound } => lower_bound,
                LpOutcome::Solved(lp) => lp.f_lp,
            };
            if certified_above(bound) {
                state.stats.discarded += 1;
                continue;
            }
        }
        state.stats.lp_solves += 1;
        let lp = match lp_solve_capped(&inst, f64::from(f) + 1e-6)? {
            LpOutcome::Above { lower_bound } => {
                debug!("edge {e}: lp bound {lower_bound} above {f}, discarded");
                state.stats.discarded += 1;
                continue;
            }
            LpOutcome::Solved(lp) => lp,
        };
        let seed = rng::derive_seed(opts.seed, "greedy-round", e as u64);
        let rounded = lbc_round(&inst, &lp, opts.rounding, seed)?;
        let witness = if rounded.value <= cheap.max_degree() {
            rounded.fault_set
        } else {
            cheap
        };
        if f64::from(witness.max_degree()) <= threshold {
            state.stats.kept_cut += 1;
        } else {
            state.stats.kept_lp += 1;
        }
        state.keep(e, &witness)?;
    }
    Ok(state.finish())
}

/// All relevant edges at `u` or all at `v`, whichever has smaller
/// faulty-degree; either one destroys every short path.
fn star_cut(inst: &LbcInstance) -> Result<FaultSet> {
    let universe = relevant_universe(inst);
    let at = |x| {
        universe
            .iter()
            .copied()
            .filter(move |&e| inst.g.edge(e).touches(x))
    };
    let (du, dv) = (at(inst.u).count(), at(inst.v).count());
    let side = if du <= dv { inst.u } else { inst.v };
    FaultSet::from_edges(inst.g, at(side))
}

/// Checks both blocking-set conditions on a spanner of at most 50 edges:
/// entries align with the addition order, each witness has faulty-degree at
/// most `f` and uses only earlier spanner edges, and every cycle of at most
/// `2k` edges meets the witness of its latest edge.
pub fn verify_blocking_set(
    g: &Graph,
    spanner: &[EdgeId],
    bs: &BlockingSet,
    k: usize,
    f: u32,
) -> Result<bool> {
    if spanner.len() > BLOCKING_CHECK_MAX_EDGES {
        return Err(Error::TooLarge {
            what: "spanner for blocking-set verification",
            size: spanner.len(),
            limit: BLOCKING_CHECK_MAX_EDGES,
        });
    }
    if bs.entries.len() != spanner.len() {
        return Ok(false);
    }
    let mut position = vec![usize::MAX; g.m()];
    for (i, &e) in spanner.iter().enumerate() {
        g.check_edge(e)?;
        if position[e] != usize::MAX {
            return Ok(false);
        }
        position[e] = i;
    }
    for (i, entry) in bs.entries.iter().enumerate() {
        if entry.edge != spanner[i] {
            return Ok(false);
        }
        if entry
            .fault_edges
            .iter()
            .any(|&x| x >= g.m() || position[x] >= i)
        {
            return Ok(false);
        }
        if !FaultSet::from_edges(g, entry.fault_edges.iter().copied())?.is_valid(f) {
            return Ok(false);
        }
    }

    let sub = g.edge_subgraph(spanner)?;
    let latest_ok = |cycle: &[EdgeId]| {
        let parent: Vec<EdgeId> = cycle.iter().map(|&x| sub.parent_edge[x]).collect();
        let latest = *parent
            .iter()
            .max_by_key(|&&x| position[x])
            .expect("non-empty cycle");
        let witness = &bs.entries[position[latest]].fault_edges;
        parent.iter().any(|x| witness.contains(x))
    };
    let broken = for_each_short_cycle(&sub.graph, 2 * k, |cycle| {
        if latest_ok(cycle) {
            ControlFlow::Continue(())
        } else {
            ControlFlow::Break(())
        }
    });
    Ok(broken.is_none())
}

/// Calls `visit` once per simple cycle with at most `max_len` edges.
pub fn for_each_short_cycle<B>(
    g: &Graph,
    max_len: usize,
    mut visit: impl FnMut(&[EdgeId]) -> ControlFlow<B>,
) -> Option<B> {
    struct Walk<'a, F> {
        g: &'a Graph,
        max_len: usize,
        start: usize,
        on_path: Vec<bool>,
        path: Vec<EdgeId>,
        visit: F,
    }
    impl<B, F: FnMut(&[EdgeId]) -> ControlFlow<B>> Walk<'_, F> {
        fn extend(&mut self, x: usize) -> ControlFlow<B> {
            for &(y, e) in self.g.neighbors(x) {
                if y == self.start && self.path.len() >= 2 {
                    // each cycle is seen in both directions; keep one
                    if self.path[0] < e {
                        self.path.push(e);
                        let flow = (self.visit)(&self.path);
                        self.path.pop();
                        flow?;
                    }
                } else if y > self.start && !self.on_path[y] && self.path.len() + 1 < self.max_len {
                    self.on_path[y] = true;
                    self.path.push(e);
                    let flow = self.extend(y);
                    self.path.pop();
                    self.on_path[y] = false;
                    flow?;
                }
            }
            ControlFlow::Continue(())
        }
    }
    let mut walk = Walk {
        g,
        max_len,
        start: 0,
        on_path: vec![false; g.n()],
        path: Vec::new(),
        visit: &mut visit,
    };
    for s in 0..g.n() {
        walk.start = s;
        walk.on_path[s] = true;
        let flow = walk.extend(s);
        walk.on_path[s] = false;
        if let ControlFlow::Break(b) = flow {
            return Some(b);
        }
    }
    None
}

#[derive(Clone, Debug, Serialize)]
pub struct SizeReport {
    pub edges: usize,
    pub n: usize,
    pub k: usize,
    pub f: u32,
    /// `max(f,1)^{1−1/k} · n^{1+1/k}`.
    pub bound_shape: f64,
    pub ratio: f64,
}

pub fn spanner_size_report(g: &Graph, spanner: &[EdgeId], k: usize, f: u32) -> SizeReport {
    let n = g.n() as f64;
    let kf = k.max(1) as f64;
    let shape = f64::from(f.max(1)).powf(1.0 - 1.0 / kf) * n.powf(1.0 + 1.0 / kf);
    SizeReport {
        edges: spanner.len(),
        n: g.n(),
        k,
        f,
        bound_shape: shape,
        ratio: if shape > 0.0 {
            spanner.len() as f64 / shape
        } else {
            0.0
        },
    }
}
