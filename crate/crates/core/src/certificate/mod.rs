//! Fault-tolerant connectivity certificates.
//!
//! Each round peels low-degree nodes, splits what is left into expanders and
//! replaces every dense expander by the union of paths embedding a random
//! regular graph into it. Edges between expanders go to the next round.

mod decompose;
mod sparsify;

use std::ops::ControlFlow;

use log::{debug, info};
use rayon::prelude::*;
use serde::Serialize;

pub use decompose::{expander_decompose, Certification, ClusterCertificate, Decomposition};
pub use sparsify::{hop_cap, sparsify_expander, RoutingResult, Sparsified};

use crate::fault::{for_each_valid_fault_set, sample_fault_sets};
use crate::graph::{conductance_bruteforce, EdgeId, FaultSet, Graph, NodeId, BRUTEFORCE_MAX_NODES};
use crate::rng;
use crate::{Error, Result};

/// Result of [`min_degree_peel`], in the input's edge ids.
#[derive(Clone, Debug)]
pub struct Peel {
    /// Edges among the surviving nodes, ascending.
    pub core: Vec<EdgeId>,
    /// Edges deleted with a peeled node, ascending.
    pub removed: Vec<EdgeId>,
    /// Peeled nodes in deletion order.
    pub removed_nodes: Vec<NodeId>,
}

/// Repeatedly deletes a node of current degree below `fprime`. The surviving
/// core has minimum degree at least `fprime` or is empty, and at most
/// `fprime·n` edges are removed.
pub fn min_degree_peel(g: &Graph, fprime: usize) -> Peel {
    let n = g.n();
    let mut degree: Vec<usize> = (0..n).map(|x| g.degree(x)).collect();
    let mut gone = vec![false; n];
    let mut edge_gone = vec![false; g.m()];
    let mut queue: Vec<NodeId> = (0..n).filter(|&x| degree[x] < fprime).collect();
    let mut queued = vec![false; n];
    for &x in &queue {
        queued[x] = true;
    }
    let mut removed_nodes = Vec::new();
    while let Some(x) = queue.pop() {
        gone[x] = true;
        removed_nodes.push(x);
        for &(y, e) in g.neighbors(x) {
            if edge_gone[e] {
                continue;
            }
            edge_gone[e] = true;
            degree[y] -= 1;
            if !gone[y] && !queued[y] && degree[y] < fprime {
                queued[y] = true;
                queue.push(y);
            }
        }
    }
    let (removed, core) = (0..g.m()).partition(|&e| edge_gone[e]);
    Peel {
        core,
        removed,
        removed_nodes,
    }
}

/// Conductance target and degree thresholds.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct CertificateParams {
    pub phi: f64,
    /// Peeling threshold is `⌈c_deg·f/φ⌉`.
    pub c_deg: f64,
    /// Use `φ = 1/ln² n` and `f′ = ⌈f/φ⁵⌉` instead; `phi` and `c_deg` are ignored.
    pub theory_constants: bool,
}

impl Default for CertificateParams {
    fn default() -> Self {
        Self {
            phi: 0.1,
            c_deg: 8.0,
            theory_constants: false,
        }
    }
}

/// Constants resolved for one input.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct Thresholds {
    pub phi: f64,
    /// Peeling degree `f′`.
    pub fprime: usize,
    /// Virtual degree `f″ = ⌊f′·φ⌋`.
    pub fprime2: usize,
}

impl CertificateParams {
    pub fn thresholds(&self, n: usize, f: u32) -> Result<Thresholds> {
        let ff = f64::from(f);
        let (phi, fprime) = if self.theory_constants {
            let ln = (n.max(3) as f64).ln();
            // clamp keeps phi inside (0, 1) for tiny n
            let phi = (1.0 / (ln * ln)).min(0.5);
            (phi, (ff / phi.powi(5)).ceil())
        } else {
            if !(self.phi > 0.0 && self.phi < 1.0) {
                return Err(Error::InvalidParameter(format!(
                    "phi must lie in (0, 1), got {}",
                    self.phi
                )));
            }
            if self.c_deg.is_nan() || self.c_deg <= 0.0 {
                return Err(Error::InvalidParameter(format!(
                    "c_deg must be positive, got {}",
                    self.c_deg
                )));
            }
            (self.phi, (self.c_deg * ff / self.phi).ceil())
        };
        let fprime = fprime.min(usize::MAX as f64 / 4.0) as usize;
        Ok(Thresholds {
            phi,
            fprime,
            fprime2: (fprime as f64 * phi).floor() as usize,
        })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ClusterRouting {
    pub nodes: usize,
    pub edges_in: usize,
    pub edges_out: usize,
    pub congestion: usize,
    pub dilation: usize,
    pub min_degree: usize,
    pub uncapped: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct IterationReport {
    pub iteration: usize,
    /// Edges entering this round.
    pub input_edges: usize,
    /// True when the round only applied the stopping rule.
    pub stopped: bool,
    pub peeled_edges: usize,
    pub clusters: usize,
    pub kept_whole: usize,
    pub cut_edges: usize,
    /// One entry per sparsified cluster.
    pub routing: Vec<ClusterRouting>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Certificate {
    /// Certificate edge ids, ascending.
    pub edges: Vec<EdgeId>,
    pub f: u32,
    pub thresholds: Thresholds,
    pub iterations: Vec<IterationReport>,
    /// Edges still pending after the last round, added as they are.
    pub leftover_edges: usize,
    pub seed: u64,
}

/// Number of rounds: `⌈2 log₂ n⌉`, at least one.
pub fn round_limit(n: usize) -> usize {
    ((2.0 * (n.max(2) as f64).log2()).ceil() as usize).max(1)
}

/// Builds an `f`-FD connectivity certificate of `g`.
pub fn fd_certificate(
    g: &Graph,
    f: u32,
    params: &CertificateParams,
    seed: u64,
) -> Result<Certificate> {
    if f == 0 {
        return Err(Error::InvalidParameter(
            "the certificate needs f >= 1".into(),
        ));
    }
    let n = g.n();
    let th = params.thresholds(n, f)?;
    let mut keep = vec![false; g.m()];
    let mut pending: Vec<EdgeId> = (0..g.m()).collect();
    let mut iterations = Vec::new();

    for iteration in 1..=round_limit(n) {
        let mut report = IterationReport {
            iteration,
            input_edges: pending.len(),
            stopped: false,
            peeled_edges: 0,
            clusters: 0,
            kept_whole: 0,
            cut_edges: 0,
            routing: Vec::new(),
        };
        if pending.len() <= th.fprime.saturating_mul(n) {
            for &e in &pending {
                keep[e] = true;
            }
            pending.clear();
            report.stopped = true;
            iterations.push(report);
            break;
        }

        let sub = g.edge_subgraph(&pending)?;
        let peel = min_degree_peel(&sub.graph, th.fprime);
        for &e in &peel.removed {
            keep[sub.parent_edge[e]] = true;
        }
        report.peeled_edges = peel.removed.len();
        let core = sub.graph.edge_subgraph(&peel.core)?;
        let to_host = |e: EdgeId| sub.parent_edge[core.parent_edge[e]];
        let decomposition = expander_decompose(&core.graph, th.phi)?;
        report.clusters = decomposition.clusters.len();

        let round_seed = rng::derive_seed(seed, "certificate-round", iteration as u64);
        let dense: Vec<usize> = (0..decomposition.views.len())
            .filter(|&j| {
                let view = &decomposition.views[j];
                view.graph.m() > 2 * th.fprime * view.graph.n()
            })
            .collect();
        for view in &decomposition.views {
            if view.graph.m() <= 2 * th.fprime * view.graph.n() {
                report.kept_whole += 1;
                for &e in &view.parent_edge {
                    keep[to_host(e)] = true;
                }
            }
        }
        let sparse: Vec<(usize, Sparsified)> = dense
            .par_iter()
            .map(|&j| {
                let cluster_seed = rng::derive_seed(round_seed, "sparsify", j as u64);
                sparsify_expander(
                    &decomposition.views[j].graph,
                    th.fprime2,
                    th.phi,
                    cluster_seed,
                )
                .map(|s| (j, s))
            })
            .collect::<Result<_>>()?;
        for (j, s) in sparse {
            let view = &decomposition.views[j];
            for &e in &s.edges {
                keep[to_host(view.parent_edge[e])] = true;
            }
            report.routing.push(ClusterRouting {
                nodes: view.graph.n(),
                edges_in: view.graph.m(),
                edges_out: s.edges.len(),
                congestion: s.routing.congestion,
                dilation: s.routing.dilation,
                min_degree: s.min_degree,
                uncapped: s.uncapped,
            });
        }

        pending = decomposition
            .cut_edges
            .iter()
            .map(|&e| to_host(e))
            .collect();
        report.cut_edges = pending.len();
        debug!(
            "round {iteration}: {} peeled, {} clusters, {} cut edges",
            report.peeled_edges, report.clusters, report.cut_edges
        );
        iterations.push(report);
    }

    let leftover_edges = pending.len();
    for &e in &pending {
        keep[e] = true;
    }
    let edges: Vec<EdgeId> = (0..g.m()).filter(|&e| keep[e]).collect();
    info!("certificate keeps {} of {} edges", edges.len(), g.m());
    Ok(Certificate {
        edges,
        f,
        thresholds: th,
        iterations,
        leftover_edges,
        seed,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct RobustnessReport {
    /// Exact conductance of the input.
    pub conductance: f64,
    pub f: u32,
    /// Fault sets checked.
    pub checked: usize,
    pub min_conductance: f64,
    /// Indices of checked sets leaving conductance below `phi/2`.
    pub failures: Vec<usize>,
}

impl RobustnessReport {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }
}

fn robustness_precheck(g: &Graph, phi: f64, f: u32) -> Result<f64> {
    if g.n() > BRUTEFORCE_MAX_NODES {
        return Err(Error::TooLarge {
            what: "graph for exact robustness checks",
            size: g.n(),
            limit: BRUTEFORCE_MAX_NODES,
        });
    }
    if !(phi > 0.0 && phi <= 1.0) {
        return Err(Error::InvalidParameter(format!(
            "phi must lie in (0, 1], got {phi}"
        )));
    }
    let conductance = conductance_bruteforce(g)?;
    if conductance < phi {
        return Err(Error::Precondition(format!(
            "graph conductance {conductance} is below phi = {phi}"
        )));
    }
    let need = 2.0 * f64::from(f) / phi;
    if (g.min_degree() as f64) < need {
        return Err(Error::Precondition(format!(
            "minimum degree {} is below 2f/phi = {need}",
            g.min_degree()
        )));
    }
    Ok(conductance)
}

fn post_fault_conductance(g: &Graph, faults: &FaultSet) -> Result<f64> {
    conductance_bruteforce(&g.without(faults))
}

fn collect(f: u32, phi: f64, conductance: f64, values: Vec<f64>) -> RobustnessReport {
    let failures = values
        .iter()
        .enumerate()
        .filter(|&(_, &v)| v < phi / 2.0)
        .map(|(i, _)| i)
        .collect();
    RobustnessReport {
        conductance,
        f,
        checked: values.len(),
        min_conductance: values.iter().copied().fold(f64::INFINITY, f64::min),
        failures,
    }
}

/// Checks `Φ(G∖F) ≥ phi/2` on `trials` sampled maximal `f`-valid fault sets.
/// `g` must have conductance at least `phi`, minimum degree at least
/// `2f/phi`, and at most 24 nodes.
pub fn check_expander_robustness(
    g: &Graph,
    phi: f64,
    f: u32,
    trials: usize,
    seed: u64,
) -> Result<RobustnessReport> {
    let conductance = robustness_precheck(g, phi, f)?;
    let faults = sample_fault_sets(g, f, 1.0, trials, rng::derive_seed(seed, "robustness", 0));
    let values = faults
        .par_iter()
        .map(|fs| post_fault_conductance(g, fs))
        .collect::<Result<Vec<_>>>()?;
    Ok(collect(f, phi, conductance, values))
}

/// Same check over every `f`-valid fault set. Stops with an error after
/// `limit` sets.
pub fn check_expander_robustness_exhaustive(
    g: &Graph,
    phi: f64,
    f: u32,
    limit: usize,
) -> Result<RobustnessReport> {
    let conductance = robustness_precheck(g, phi, f)?;
    let mut values = Vec::new();
    let overflow = for_each_valid_fault_set(g, f, |fs| {
        if values.len() == limit {
            return ControlFlow::Break(Error::TooLarge {
                what: "fault-set enumeration",
                size: limit + 1,
                limit,
            });
        }
        match post_fault_conductance(g, fs) {
            Ok(v) => {
                values.push(v);
                ControlFlow::Continue(())
            }
            Err(err) => ControlFlow::Break(err),
        }
    });
    if let Some(err) = overflow {
        return Err(err);
    }
    Ok(collect(f, phi, conductance, values))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fault::{hypercube_adversarial_sets, verify_certificate};
    use crate::generators::{gen_generalized_hypercube, gen_gnp, gen_named};

    #[test]
    fn peel_examples() {
        let star = Graph::from_unweighted(6, (1..6).map(|x| (0, x))).unwrap();
        let p = min_degree_peel(&star, 2);
        assert!(p.core.is_empty());
        assert_eq!(p.removed.len(), 5);
        assert!(p.removed.len() <= 2 * 6);

        let k4 = gen_named("complete-4").unwrap();
        let p = min_degree_peel(&k4, 3);
        assert_eq!(p.core.len(), 6);
        assert!(p.removed.is_empty());

        let path = gen_named("path-5").unwrap();
        assert!(min_degree_peel(&path, 2).core.is_empty());
    }

    #[test]
    fn peel_leaves_high_min_degree() {
        let g = gen_gnp(80, 0.1, 3).unwrap();
        for fprime in 1..8 {
            let p = min_degree_peel(&g, fprime);
            assert!(p.removed.len() <= fprime * g.n());
            let core = g.edge_subgraph(&p.core).unwrap().graph;
            for x in 0..g.n() {
                let d = core.degree(x);
                assert!(d == 0 || d >= fprime);
            }
        }
    }

    #[test]
    fn thresholds_follow_defaults() {
        let th = CertificateParams::default().thresholds(100, 2).unwrap();
        assert_eq!((th.fprime, th.fprime2), (160, 16));
        let theory = CertificateParams {
            theory_constants: true,
            ..Default::default()
        };
        let th = theory.thresholds(100, 1).unwrap();
        assert!(th.fprime > 100 * 100);
    }

    #[test]
    fn small_input_hits_the_stopping_rule() {
        let g = gen_named("petersen").unwrap();
        let c = fd_certificate(&g, 1, &CertificateParams::default(), 0).unwrap();
        assert_eq!(c.edges.len(), g.m());
        assert_eq!(c.iterations.len(), 1);
        assert!(c.iterations[0].stopped);
    }

    #[test]
    fn hypercube_needs_every_edge() {
        // [2]^4 with fault degree 1
        let g = gen_generalized_hypercube(2, 4).unwrap();
        let c = fd_certificate(&g, 1, &CertificateParams::default(), 5).unwrap();
        assert_eq!(c.edges.len(), g.m());
        for (e, fs) in hypercube_adversarial_sets(&g, 2, 4).unwrap() {
            let without: Vec<EdgeId> = c.edges.iter().copied().filter(|&x| x != e).collect();
            assert!(!verify_certificate(&g, &without, &[fs]).unwrap().ok());
        }
    }

    #[test]
    fn dense_graph_goes_through_sparsification() {
        // phi = 0.3: f' = 27, f'' = 8; average degree ~120 > 4f'
        let g = gen_gnp(200, 0.6, 11).unwrap();
        let params = CertificateParams {
            phi: 0.3,
            ..Default::default()
        };
        let c = fd_certificate(&g, 1, &params, 2).unwrap();
        assert!(!c.iterations[0].stopped);
        assert!(!c.iterations[0].routing.is_empty());
        assert!(c.edges.len() < g.m() / 2);
        let faults = sample_fault_sets(&g, 1, 1.0, 100, 6);
        assert!(verify_certificate(&g, &c.edges, &faults).unwrap().ok());
    }

    #[test]
    fn certificate_is_reproducible() {
        let g = gen_gnp(120, 0.7, 1).unwrap();
        let params = CertificateParams {
            phi: 0.3,
            ..Default::default()
        };
        let a = fd_certificate(&g, 1, &params, 4).unwrap();
        let b = fd_certificate(&g, 1, &params, 4).unwrap();
        assert_eq!(a.edges, b.edges);
    }

    #[test]
    fn robustness_of_complete_graphs() {
        let k12 = gen_named("complete-12").unwrap();
        let phi = conductance_bruteforce(&k12).unwrap();
        let r = check_expander_robustness(&k12, phi, 1, 100, 3).unwrap();
        assert!(r.ok());
        assert_eq!(r.checked, 100);
        assert!(r.min_conductance >= phi / 2.0);

        let k8 = gen_named("complete-8").unwrap();
        let phi = conductance_bruteforce(&k8).unwrap();
        let r = check_expander_robustness_exhaustive(&k8, phi, 1, 10_000).unwrap();
        assert!(r.ok());
        // 764 matchings of K8, the empty one included
        assert_eq!(r.checked, 764);
    }

    #[test]
    fn zero_faults_keep_conductance() {
        let p = gen_named("petersen").unwrap();
        let phi = conductance_bruteforce(&p).unwrap();
        let r = check_expander_robustness(&p, phi, 0, 5, 0).unwrap();
        assert!((r.min_conductance - phi).abs() < 1e-12);
    }

    #[test]
    fn robustness_rejects_low_degree() {
        let c = gen_named("cycle-8").unwrap();
        let phi = conductance_bruteforce(&c).unwrap();
        assert!(matches!(
            check_expander_robustness(&c, phi, 1, 5, 0),
            Err(Error::Precondition(_))
        ));
    }
}
