//! LP relaxation (minimize `f` subject to `Σ_{e∋x} c_e ≤ f` and
//! `Σ_{e∈π} c_e ≥ 1` for short paths `π`) and its randomized rounding.

use std::collections::HashSet;

use log::{debug, warn};
use minilp::{ComparisonOp, LinearExpr, OptimizationDirection, Problem, Variable};
use rand::Rng;
use rayon::prelude::*;

use super::layered::{cheapest_path, CheapPath};
use super::{relevant_universe, CutSolution, Fractional, LbcInstance, RoundingMeta};
use crate::graph::{hop_limited_reachable, EdgeId, FaultSet, Graph, NodeId};
use crate::rng;
use crate::{Error, Result};

/// A path lighter than `1 - SEPARATION_TOLERANCE` is reported as violated.
pub const SEPARATION_TOLERANCE: f64 = 1e-9;

/// Slack used inside the cutting-plane loop, above the simplex tolerance.
const CUTTING_TOLERANCE: f64 = 1e-7;

const MAX_CUTTING_ROUNDS: usize = 200_000;

/// Optimal fractional solution of the relaxation.
#[derive(Clone, Debug)]
pub struct LpSolution {
    /// Value per edge of the instance graph, in `[0, 1]`; zero off the universe.
    pub c: Vec<f64>,
    pub f_lp: f64,
    /// Path constraints added by the cutting-plane loop.
    pub path_constraints: usize,
}

/// Rounding constants: scale `a` doubled at most `max_doublings` times, with
/// `retries` independent draws per scale.
#[derive(Clone, Copy, Debug)]
pub struct RoundingParams {
    pub a: f64,
    pub retries: usize,
    pub max_doublings: u32,
}

impl Default for RoundingParams {
    fn default() -> Self {
        Self {
            a: 0.25,
            retries: 50,
            max_doublings: 6,
        }
    }
}

/// A `u`-`v` path of at most `k` hops whose `c`-weight is below
/// `1 - SEPARATION_TOLERANCE`, if any.
pub fn lbc_separation_oracle(
    g: &Graph,
    c: &[f64],
    u: NodeId,
    v: NodeId,
    k: usize,
) -> Option<CheapPath> {
    separate(g, c, u, v, k, SEPARATION_TOLERANCE)
}

fn separate(g: &Graph, c: &[f64], u: NodeId, v: NodeId, k: usize, tol: f64) -> Option<CheapPath> {
    cheapest_path(g, u, v, k, |e| Some(c[e].max(0.0))).filter(|p| p.cost < 1.0 - tol)
}

pub(crate) enum LpOutcome {
    Solved(LpSolution),
    /// The optimum is known to exceed the requested ceiling.
    Above {
        lower_bound: f64,
    },
}

/// Solves the relaxation to optimality.
pub fn lbc_lp_solve(inst: &LbcInstance) -> Result<LpSolution> {
    match lp_solve_capped(inst, f64::INFINITY)? {
        LpOutcome::Solved(sol) => Ok(sol),
        LpOutcome::Above { .. } => unreachable!("no ceiling"),
    }
}

/// Cutting-plane solve that stops early once an intermediate optimum, a
/// lower bound on the final one, exceeds `ceiling`.
pub(crate) fn lp_solve_capped(inst: &LbcInstance, ceiling: f64) -> Result<LpOutcome> {
    let g = inst.g;
    let universe = relevant_universe(inst);
    if universe.is_empty() {
        return Ok(LpOutcome::Solved(LpSolution {
            c: vec![0.0; g.m()],
            f_lp: 0.0,
            path_constraints: 0,
        }));
    }

    let mut problem = Problem::new(OptimizationDirection::Minimize);
    let f_var = problem.add_var(1.0, (0.0, f64::INFINITY));
    let mut var_of: Vec<Option<Variable>> = vec![None; g.m()];
    for &e in &universe {
        var_of[e] = Some(problem.add_var(0.0, (0.0, 1.0)));
    }
    for x in 0..g.n() {
        let mut incident: Vec<Variable> = g
            .neighbors(x)
            .iter()
            .filter_map(|&(_, e)| var_of[e])
            .collect();
        if incident.is_empty() {
            continue;
        }
        incident.sort_by_key(|var| var.idx());
        let mut expr = LinearExpr::empty();
        expr.add(f_var, -1.0);
        for var in incident {
            expr.add(var, 1.0);
        }
        problem.add_constraint(expr, ComparisonOp::Le, 0.0);
    }
    let mut sol = problem.solve().map_err(|e| Error::Lp(e.to_string()))?;

    let mut c = vec![0.0; g.m()];
    let mut seen: HashSet<Vec<EdgeId>> = HashSet::new();
    let mut rounds = 0;
    loop {
        for &e in &universe {
            c[e] = sol[var_of[e].expect("universe edge")].clamp(0.0, 1.0);
        }
        if sol.objective() > ceiling {
            return Ok(LpOutcome::Above {
                lower_bound: sol.objective(),
            });
        }
        let Some(path) = separate(g, &c, inst.u, inst.v, inst.k, CUTTING_TOLERANCE) else {
            break;
        };
        let mut key = path.edges.clone();
        key.sort_unstable();
        if !seen.insert(key) {
            warn!(
                "cutting plane repeated a path of weight {}; stopping",
                path.cost
            );
            break;
        }
        rounds += 1;
        if rounds > MAX_CUTTING_ROUNDS {
            return Err(Error::Lp(format!(
                "no convergence after {MAX_CUTTING_ROUNDS} cutting rounds"
            )));
        }
        let mut vars: Vec<Variable> = path
            .edges
            .iter()
            .map(|&e| var_of[e].expect("universe edge"))
            .collect();
        vars.sort_by_key(|var| var.idx());
        let expr: LinearExpr = vars.into_iter().map(|var| (var, 1.0)).collect();
        sol = sol
            .add_constraint(expr, ComparisonOp::Ge, 1.0)
            .map_err(|e| Error::Lp(e.to_string()))?;
    }
    debug!(
        "lp solved with {rounds} path constraints, f_lp = {}",
        sol.objective()
    );
    Ok(LpOutcome::Solved(LpSolution {
        c,
        f_lp: sol.objective().max(0.0),
        path_constraints: rounds,
    }))
}

/// Includes each edge independently with probability `min(A·c_e·k·ln n, 1)`,
/// keeps the best valid cut over `retries` draws, and doubles `A` while no
/// draw is valid. Each valid draw is pruned of edges whose removal keeps it a
/// cut.
pub fn lbc_round(
    inst: &LbcInstance,
    lp: &LpSolution,
    params: RoundingParams,
    seed: u64,
) -> Result<CutSolution> {
    let g = inst.g;
    let fractional = Some(Fractional {
        c: lp.c.clone(),
        f_lp: lp.f_lp,
    });
    if !hop_limited_reachable(g, &crate::graph::NoEdges, inst.u, inst.v, inst.k) {
        return Ok(CutSolution {
            fault_set: FaultSet::empty(g),
            value: 0,
            fractional,
            rounding: Some(RoundingMeta {
                a: params.a,
                doublings: 0,
                attempts: 0,
                retries: params.retries,
            }),
        });
    }
    if params.a.is_nan() || params.a <= 0.0 || params.retries == 0 {
        return Err(Error::InvalidParameter(
            "rounding needs A > 0 and at least one retry".into(),
        ));
    }
    let support: Vec<EdgeId> = (0..g.m()).filter(|&e| lp.c[e] > 0.0).collect();
    let scale = inst.k as f64 * (g.n() as f64).ln();
    let mut attempts = 0;
    for doubling in 0..=params.max_doublings {
        let a = params.a * f64::from(1u32 << doubling);
        let best = (0..params.retries)
            .into_par_iter()
            .filter_map(|r| {
                let index = u64::from(doubling) * params.retries as u64 + r as u64;
                let mut rng = rng::indexed_stream(seed, "lbc-round", index);
                let mut fs = FaultSet::empty(g);
                for &e in &support {
                    let p = (a * lp.c[e] * scale).min(1.0);
                    if rng.gen::<f64>() < p {
                        fs.insert(g, e).expect("edge in range");
                    }
                }
                inst.is_cut(&fs).then(|| prune(inst, fs))
            })
            .min_by(|a, b| {
                a.max_degree()
                    .cmp(&b.max_degree())
                    .then_with(|| a.to_vec().cmp(&b.to_vec()))
            });
        attempts += params.retries;
        if let Some(fs) = best {
            return Ok(CutSolution {
                value: fs.max_degree(),
                fault_set: fs,
                fractional,
                rounding: Some(RoundingMeta {
                    a,
                    doublings: doubling,
                    attempts,
                    retries: params.retries,
                }),
            });
        }
    }
    Err(Error::RoundingFailed(format!(
        "no valid cut for ({}, {}) with k = {} after {attempts} draws up to A = {}; f_lp = {}",
        inst.u,
        inst.v,
        inst.k,
        params.a * f64::from(1u32 << params.max_doublings),
        lp.f_lp
    )))
}

/// Drops edges not needed for the cut, highest faulty-degree endpoints first.
pub(crate) fn prune(inst: &LbcInstance, mut fs: FaultSet) -> FaultSet {
    let g = inst.g;
    let mut order = fs.to_vec();
    order.sort_by_key(|&e| {
        let edge = g.edge(e);
        (
            std::cmp::Reverse(fs.degree(edge.u).max(fs.degree(edge.v))),
            e,
        )
    });
    for e in order {
        fs.remove(g, e);
        if !inst.is_cut(&fs) {
            fs.insert(g, e).expect("edge in range");
        }
    }
    fs
}

/// LP solve followed by rounding. The returned value is the faulty-degree of
/// a valid cut, hence at least the optimum.
pub fn approx_min_max_lbc(
    inst: &LbcInstance,
    params: RoundingParams,
    seed: u64,
) -> Result<CutSolution> {
    let lp = lbc_lp_solve(inst)?;
    let sol = lbc_round(inst, &lp, params, seed)?;
    debug_assert!(lp.f_lp <= f64::from(sol.value) + 1e-6);
    Ok(sol)
}
