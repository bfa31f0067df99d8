//! Conductance `Φ(S) = |∂S| / min(Vol(S), Vol(V∖S))`, with volumes taken
//! from the degree weighting plus `ext_degree`.

use nalgebra::{DMatrix, SymmetricEigen};

use super::{component_labels, Graph, NoEdges, NodeId};
use crate::{Error, Result};

/// Largest graph accepted by the exhaustive routines (2^(n-1) cuts).
pub const BRUTEFORCE_MAX_NODES: usize = 24;

/// Conductance of the cut given by `side` (true = in S). Zero for trivial cuts.
pub fn cut_conductance(g: &Graph, side: &[bool]) -> f64 {
    let mut boundary = 0u64;
    for e in g.edges() {
        if side[e.u] != side[e.v] {
            boundary += 1;
        }
    }
    let vol_s: u64 = (0..g.n())
        .filter(|&x| side[x])
        .map(|x| g.volume_weight(x))
        .sum();
    let vol_rest = g.total_volume() - vol_s;
    let denom = vol_s.min(vol_rest);
    if denom == 0 {
        0.0
    } else {
        boundary as f64 / denom as f64
    }
}

/// Exact `Φ(G)` by enumerating all nontrivial cuts.
///
/// Disconnected graphs have conductance 0. A graph with fewer than two nodes
/// has no proper cut; it is reported as 1.
pub fn conductance_bruteforce(g: &Graph) -> Result<f64> {
    min_conductance_cut(g).map(|(phi, _)| phi)
}

/// Exact minimum-conductance cut and one side of it.
pub fn min_conductance_cut(g: &Graph) -> Result<(f64, Vec<NodeId>)> {
    let n = g.n();
    if n > BRUTEFORCE_MAX_NODES {
        return Err(Error::TooLarge {
            what: "graph for exhaustive conductance",
            size: n,
            limit: BRUTEFORCE_MAX_NODES,
        });
    }
    if n < 2 {
        return Ok((1.0, Vec::new()));
    }
    let labels = component_labels(g, &NoEdges);
    if labels.iter().any(|&l| l != 0) {
        let side = (0..n).filter(|&x| labels[x] == 0).collect();
        return Ok((0.0, side));
    }

    let adj: Vec<u32> = (0..n)
        .map(|x| {
            g.neighbors(x)
                .iter()
                .fold(0u32, |acc, &(y, _)| acc | (1 << y))
        })
        .collect();
    let deg: Vec<i64> = (0..n).map(|x| g.degree(x) as i64).collect();
    let weight: Vec<u64> = (0..n).map(|x| g.volume_weight(x)).collect();
    let total: u64 = weight.iter().sum();

    // Gray-code walk over subsets of the first n-1 nodes; node n-1 stays out
    // of S so every cut is visited once.
    let mut set = 0u32;
    let mut cut = 0i64;
    let mut vol = 0u64;
    let mut best = (f64::INFINITY, 0u32);
    for i in 1u32..(1u32 << (n - 1)) {
        let x = i.trailing_zeros() as usize;
        let inside = i64::from((adj[x] & set).count_ones());
        if set & (1 << x) == 0 {
            cut += deg[x] - 2 * inside;
            vol += weight[x];
        } else {
            cut -= deg[x] - 2 * inside;
            vol -= weight[x];
        }
        set ^= 1 << x;
        let denom = vol.min(total - vol);
        let phi = cut as f64 / denom as f64;
        if phi < best.0 {
            best = (phi, set);
        }
    }
    let side = (0..n).filter(|&x| best.1 & (1 << x) != 0).collect();
    Ok((best.0, side))
}

/// Second normalized-Laplacian eigenpair and the best sweep cut along it.
#[derive(Clone, Debug)]
pub struct SpectralSweep {
    pub lambda2: f64,
    /// Sweep-cut side with the smallest conductance.
    pub side: Vec<NodeId>,
    pub sweep_conductance: f64,
}

fn normalized_laplacian(g: &Graph) -> DMatrix<f64> {
    let n = g.n();
    let d: Vec<f64> = (0..n).map(|x| g.volume_weight(x) as f64).collect();
    let mut m = DMatrix::zeros(n, n);
    for x in 0..n {
        m[(x, x)] = g.degree(x) as f64 / d[x];
    }
    for e in g.edges() {
        let val = -1.0 / (d[e.u] * d[e.v]).sqrt();
        m[(e.u, e.v)] = val;
        m[(e.v, e.u)] = val;
    }
    m
}

/// Computes `λ₂` of `D^{-1/2} L D^{-1/2}` (with `D` including `ext_degree`)
/// and sweeps the embedding `x = D^{-1/2} y`.
pub fn spectral_sweep(g: &Graph) -> Result<SpectralSweep> {
    let n = g.n();
    if n < 2 {
        return Err(Error::InvalidParameter(
            "spectral sweep needs at least two nodes".into(),
        ));
    }
    if component_labels(g, &NoEdges).iter().any(|&l| l != 0) {
        return Err(Error::Disconnected);
    }
    let m = normalized_laplacian(g);
    let eig = match m.clone().try_symmetric_eigen(1e-12, 10_000) {
        Some(eig) => eig,
        None => {
            // retry with a deterministic, tiny symmetric perturbation
            let mut p = m;
            for x in 0..n {
                p[(x, x)] += 1e-10 * ((x % 7) as f64 + 1.0);
            }
            p.try_symmetric_eigen(1e-10, 100_000)
                .ok_or_else(|| Error::Eigen(format!("no convergence on {n} nodes")))?
        }
    };
    let (lambda2, y) = second_pair(&eig);
    let d: Vec<f64> = (0..n).map(|x| g.volume_weight(x) as f64).collect();
    let x: Vec<f64> = (0..n).map(|i| y[i] / d[i].sqrt()).collect();

    let mut order: Vec<NodeId> = (0..n).collect();
    order.sort_by(|&a, &b| x[a].total_cmp(&x[b]).then(a.cmp(&b)));
    let total = g.total_volume();
    let mut inside = vec![false; n];
    let mut cut = 0i64;
    let mut vol = 0u64;
    let mut best = (f64::INFINITY, 0usize);
    for (i, &v) in order.iter().enumerate().take(n - 1) {
        let nbrs_in = g.neighbors(v).iter().filter(|&&(y, _)| inside[y]).count() as i64;
        cut += g.degree(v) as i64 - 2 * nbrs_in;
        vol += g.volume_weight(v);
        inside[v] = true;
        let denom = vol.min(total - vol);
        let phi = if denom == 0 {
            0.0
        } else {
            cut as f64 / denom as f64
        };
        if phi < best.0 {
            best = (phi, i + 1);
        }
    }
    let mut side = order[..best.1].to_vec();
    side.sort_unstable();
    Ok(SpectralSweep {
        lambda2,
        side,
        sweep_conductance: best.0,
    })
}

fn second_pair(eig: &SymmetricEigen<f64, nalgebra::Dyn>) -> (f64, Vec<f64>) {
    let mut idx: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    idx.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let j = idx[1];
    let lambda2 = eig.eigenvalues[j].max(0.0);
    let y = eig.eigenvectors.column(j).iter().copied().collect();
    (lambda2, y)
}

/// Cheeger lower bound `λ₂ / 2 ≤ Φ(G)`; rejects disconnected graphs.
pub fn conductance_spectral_lower_bound(g: &Graph) -> Result<f64> {
    if g.n() < 2 {
        return Ok(1.0);
    }
    if component_labels(g, &NoEdges).iter().any(|&l| l != 0) {
        return Err(Error::Disconnected);
    }
    let eig = normalized_laplacian(g)
        .try_symmetric_eigen(1e-12, 10_000)
        .ok_or_else(|| Error::Eigen(format!("no convergence on {} nodes", g.n())))?;
    Ok(second_pair(&eig).0 / 2.0)
}
