//! Min-max length-bounded cut: given `u`, `v` and a hop bound `k`, find a
//! fault set of least faulty-degree that leaves no `u`-`v` path of at most
//! `k` edges.
//!
//! Hops are unweighted throughout. [`lbc_bruteforce`] is exact and meant for
//! small instances; [`approx_min_max_lbc`] solves the LP relaxation by cutting
//! planes and rounds it.

pub(crate) mod layered;
pub(crate) mod lp;

use serde::Serialize;

use crate::graph::{
    hop_distances, hop_limited_reachable, EdgeId, FaultSet, Graph, NoEdges, NodeId, UNREACHABLE,
};
use crate::{Error, Result};

pub use layered::CheapPath;
pub use lp::{
    approx_min_max_lbc, lbc_lp_solve, lbc_round, lbc_separation_oracle, LpSolution, RoundingParams,
    SEPARATION_TOLERANCE,
};

/// Default cap on the relevant universe for exact search.
pub const DEFAULT_MAX_UNIVERSE: usize = 24;

#[derive(Clone, Copy, Debug)]
pub struct LbcInstance<'a> {
    pub g: &'a Graph,
    pub u: NodeId,
    pub v: NodeId,
    pub k: usize,
}

impl<'a> LbcInstance<'a> {
    pub fn new(g: &'a Graph, u: NodeId, v: NodeId, k: usize) -> Result<Self> {
        g.check_node(u)?;
        g.check_node(v)?;
        if u == v {
            return Err(Error::InvalidParameter("cut endpoints must differ".into()));
        }
        if k == 0 {
            return Err(Error::InvalidParameter(
                "hop bound must be at least 1".into(),
            ));
        }
        Ok(Self { g, u, v, k })
    }

    /// Whether `faults` leaves no `u`-`v` path with at most `k` hops.
    pub fn is_cut(&self, faults: &FaultSet) -> bool {
        !hop_limited_reachable(self.g, faults, self.u, self.v, self.k)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Fractional {
    /// LP value per edge of the instance graph.
    pub c: Vec<f64>,
    pub f_lp: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct RoundingMeta {
    /// Scale constant in effect when the returned cut was found.
    pub a: f64,
    pub doublings: u32,
    /// Roundings drawn in total, over all scales.
    pub attempts: usize,
    pub retries: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct CutSolution {
    pub fault_set: FaultSet,
    /// Faulty-degree of `fault_set`.
    pub value: u32,
    pub fractional: Option<Fractional>,
    pub rounding: Option<RoundingMeta>,
}

impl CutSolution {
    pub(crate) fn exact(fault_set: FaultSet) -> Self {
        Self {
            value: fault_set.max_degree(),
            fault_set,
            fractional: None,
            rounding: None,
        }
    }
}

/// Limits for exact search.
#[derive(Clone, Copy, Debug)]
pub struct SearchLimits {
    pub max_universe: usize,
    /// Branch-and-bound nodes per decision before giving up.
    pub max_nodes: u64,
}

impl Default for SearchLimits {
    fn default() -> Self {
        Self {
            max_universe: DEFAULT_MAX_UNIVERSE,
            max_nodes: 50_000_000,
        }
    }
}

/// Edges lying on some `u`-`v` walk of at most `k` hops, in id order.
pub fn relevant_universe(inst: &LbcInstance) -> Vec<EdgeId> {
    let from_u = hop_distances(inst.g, &NoEdges, inst.u);
    let to_v = hop_distances(inst.g, &NoEdges, inst.v);
    let within = |a: usize, b: usize| a != UNREACHABLE && b != UNREACHABLE && a + 1 + b <= inst.k;
    inst.g
        .edges()
        .iter()
        .enumerate()
        .filter(|(_, e)| within(from_u[e.u], to_v[e.v]) || within(from_u[e.v], to_v[e.u]))
        .map(|(id, _)| id)
        .collect()
}

/// Valid cut built by repeatedly taking a shortest surviving short path and
/// cutting its edge whose endpoints carry the fewest cut edges, then pruned.
/// Its faulty-degree is an upper bound on the optimum.
pub fn greedy_hitting_cut(inst: &LbcInstance) -> FaultSet {
    let g = inst.g;
    let mut fs = FaultSet::empty(g);
    while let Some(path) = layered::cheapest_path(g, inst.u, inst.v, inst.k, |e| {
        (!fs.contains(e)).then_some(1.0)
    }) {
        let &e = path
            .edges
            .iter()
            .min_by_key(|&&e| {
                let edge = g.edge(e);
                (
                    fs.degree(edge.u).max(fs.degree(edge.v)),
                    fs.degree(edge.u) + fs.degree(edge.v),
                )
            })
            .expect("a u-v path has an edge");
        fs.insert(g, e).expect("edge in range");
    }
    lp::prune(inst, fs)
}

/// Lower bound on the optimum from 2-hop paths: `u` and `v` each carry
/// half of the dual weight, so every common neighbor adds 1/2.
pub fn common_neighbor_bound(inst: &LbcInstance) -> f64 {
    if inst.k < 2 {
        return if inst.g.find_edge(inst.u, inst.v).is_some() {
            1.0
        } else {
            0.0
        };
    }
    let mut at_u = vec![false; inst.g.n()];
    for &(x, _) in inst.g.neighbors(inst.u) {
        at_u[x] = true;
    }
    let common = inst
        .g
        .neighbors(inst.v)
        .iter()
        .filter(|&&(x, _)| at_u[x])
        .count();
    let direct = usize::from(inst.g.find_edge(inst.u, inst.v).is_some());
    (common as f64 + direct as f64) / 2.0
}

/// Exact minimum over the default limits.
pub fn lbc_bruteforce(inst: &LbcInstance) -> Result<CutSolution> {
    lbc_bruteforce_with(inst, SearchLimits::default())
}

/// Exact minimum: decides budgets `1, 2, …` until one admits a cut. The
/// first witness found under the deterministic search order is returned.
pub fn lbc_bruteforce_with(inst: &LbcInstance, limits: SearchLimits) -> Result<CutSolution> {
    let universe = check_universe(inst, limits)?;
    if universe.is_empty() {
        return Ok(CutSolution::exact(FaultSet::empty(inst.g)));
    }
    let mut search = Search::new(inst, &universe, limits.max_nodes);
    for budget in 1.. {
        if let Some(fs) = search.run(budget)? {
            let sol = CutSolution::exact(fs);
            debug_assert!(inst.is_cut(&sol.fault_set));
            return Ok(sol);
        }
    }
    unreachable!("the star cut at u has degree at most deg(u)")
}

/// A cut of faulty-degree at most `budget`, if one exists.
pub fn lbc_decide(
    inst: &LbcInstance,
    budget: u32,
    limits: SearchLimits,
) -> Result<Option<FaultSet>> {
    let universe = check_universe(inst, limits)?;
    if universe.is_empty() {
        return Ok(Some(FaultSet::empty(inst.g)));
    }
    if budget == 0 {
        return Ok(None);
    }
    Search::new(inst, &universe, limits.max_nodes).run(budget)
}

fn check_universe(inst: &LbcInstance, limits: SearchLimits) -> Result<Vec<EdgeId>> {
    let universe = relevant_universe(inst);
    if universe.len() > limits.max_universe {
        return Err(Error::TooLarge {
            what: "length-bounded cut universe",
            size: universe.len(),
            limit: limits.max_universe,
        });
    }
    Ok(universe)
}

/// Path-branching search. Every valid cut hits each surviving short path, so
/// branching on which edge of one such path is cut (with earlier choices on
/// that path excluded) covers every cut exactly once.
struct Search<'a> {
    inst: &'a LbcInstance<'a>,
    relevant: Vec<bool>,
    in_cut: Vec<bool>,
    kept: Vec<bool>,
    degree: Vec<u32>,
    budget: u32,
    visited: u64,
    max_nodes: u64,
}

impl<'a> Search<'a> {
    fn new(inst: &'a LbcInstance<'a>, universe: &[EdgeId], max_nodes: u64) -> Self {
        let mut relevant = vec![false; inst.g.m()];
        for &e in universe {
            relevant[e] = true;
        }
        Self {
            inst,
            relevant,
            in_cut: vec![false; inst.g.m()],
            kept: vec![false; inst.g.m()],
            degree: vec![0; inst.g.n()],
            budget: 0,
            visited: 0,
            max_nodes,
        }
    }

    fn run(&mut self, budget: u32) -> Result<Option<FaultSet>> {
        self.budget = budget;
        if !self.descend()? {
            return Ok(None);
        }
        let ids = (0..self.inst.g.m()).filter(|&e| self.in_cut[e]);
        let fs = FaultSet::from_edges(self.inst.g, ids)?;
        self.in_cut.fill(false);
        self.degree.fill(0);
        Ok(Some(fs))
    }

    fn cuttable(&self, e: EdgeId) -> bool {
        let edge = self.inst.g.edge(e);
        !self.kept[e] && self.degree[edge.u] < self.budget && self.degree[edge.v] < self.budget
    }

    /// True when the current partial cut extends to a full one; on success
    /// the cut is left in place.
    fn descend(&mut self) -> Result<bool> {
        self.visited += 1;
        if self.visited > self.max_nodes {
            return Err(Error::SearchBudgetExceeded {
                budget: self.max_nodes,
            });
        }
        let path =
            layered::cheapest_path(self.inst.g, self.inst.u, self.inst.v, self.inst.k, |e| {
                if !self.relevant[e] || self.in_cut[e] {
                    None
                } else if self.cuttable(e) {
                    Some(1.0)
                } else {
                    Some(0.0)
                }
            });
        let Some(path) = path else { return Ok(true) };
        if path.cost == 0.0 {
            return Ok(false);
        }
        let choices: Vec<EdgeId> = path
            .edges
            .into_iter()
            .filter(|&e| self.cuttable(e))
            .collect();
        let g = self.inst.g;
        let mut result = false;
        for (i, &e) in choices.iter().enumerate() {
            if i > 0 {
                self.kept[choices[i - 1]] = true;
            }
            if !self.cuttable(e) {
                continue;
            }
            let edge = g.edge(e);
            self.in_cut[e] = true;
            self.degree[edge.u] += 1;
            self.degree[edge.v] += 1;
            if self.descend()? {
                result = true;
                break;
            }
            self.in_cut[e] = false;
            self.degree[edge.u] -= 1;
            self.degree[edge.v] -= 1;
        }
        for &e in &choices {
            self.kept[e] = false;
        }
        Ok(result)
    }
}
