//! Seeded graph families, including the two lower-bound families whose only
//! valid fault-tolerant subgraph is the whole graph.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::graph::{Graph, NodeId};
use crate::rng;
use crate::{Error, Result};

/// Largest generalized hypercube `f^d` that will be built.
pub const HYPERCUBE_MAX_NODES: usize = 1_000_000;

const REGULAR_ATTEMPTS: usize = 200;

/// Erdős–Rényi `G(n, p)`: pairs `(i, j)`, `i < j`, visited in lexicographic
/// order, each kept with probability `p`.
pub fn gen_gnp(n: usize, p: f64, seed: u64) -> Result<Graph> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidParameter(format!(
            "probability {p} outside [0, 1]"
        )));
    }
    let mut rng = rng::stream(seed, "gnp");
    let mut g = Graph::new(n);
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen::<f64>() < p {
                g.add_edge(i, j, 1.0)?;
            }
        }
    }
    Ok(g)
}

/// Simple `d`-regular graph from the pairing model.
///
/// Points are paired one at a time; a pair that would create a loop or a
/// repeated edge is rejected and redrawn. If no admissible pair is left the
/// attempt restarts, up to a fixed budget.
pub fn gen_random_regular(n: usize, d: usize, seed: u64) -> Result<Graph> {
    if d >= n.max(1) && !(n == 0 && d == 0) {
        return Err(Error::InvalidParameter(format!(
            "degree {d} must be below n = {n}"
        )));
    }
    if (n * d) % 2 == 1 {
        return Err(Error::InvalidParameter(format!(
            "n·d = {} must be even",
            n * d
        )));
    }
    if d == n.saturating_sub(1) {
        return complete(n);
    }
    let mut rng = rng::stream(seed, "random-regular");
    for _ in 0..REGULAR_ATTEMPTS {
        if let Some(g) = try_pairing(n, d, &mut rng)? {
            return Ok(g);
        }
    }
    Err(Error::RegularGenerationFailed {
        n,
        d,
        seed,
        attempts: REGULAR_ATTEMPTS,
    })
}

fn try_pairing(n: usize, d: usize, rng: &mut rng::Rng) -> Result<Option<Graph>> {
    let mut points: Vec<NodeId> = (0..n).flat_map(|x| std::iter::repeat_n(x, d)).collect();
    let mut g = Graph::new(n);
    let admissible = |g: &Graph, a: NodeId, b: NodeId| a != b && g.find_edge(a, b).is_none();
    while !points.is_empty() {
        let mut picked = None;
        for _ in 0..64 {
            let i = rng.gen_range(0..points.len());
            let j = rng.gen_range(0..points.len());
            if i != j && admissible(&g, points[i], points[j]) {
                picked = Some((i, j));
                break;
            }
        }
        if picked.is_none() {
            let mut options = Vec::new();
            for i in 0..points.len() {
                for j in i + 1..points.len() {
                    if admissible(&g, points[i], points[j]) {
                        options.push((i, j));
                    }
                }
            }
            match options.choose(rng) {
                Some(&pair) => picked = Some(pair),
                None => return Ok(None),
            }
        }
        let (i, j) = picked.expect("set above");
        g.add_edge(points[i], points[j], 1.0)?;
        let (hi, lo) = if i > j { (i, j) } else { (j, i) };
        points.swap_remove(hi);
        points.swap_remove(lo);
    }
    Ok(Some(g))
}

fn complete(n: usize) -> Result<Graph> {
    let mut g = Graph::new(n);
    for i in 0..n {
        for j in i + 1..n {
            g.add_edge(i, j, 1.0)?;
        }
    }
    Ok(g)
}

/// Replaces node `x` by copies `x·f + i` (`0 ≤ i < f`) and every edge by the
/// complete bipartite graph between the two copy sets.
pub fn gen_girth_blowup(base: &Graph, f: usize) -> Result<Graph> {
    if f == 0 {
        return Err(Error::InvalidParameter(
            "blow-up factor must be at least 1".into(),
        ));
    }
    if !base.is_unweighted() {
        return Err(Error::InvalidParameter(
            "blow-up base must be unweighted".into(),
        ));
    }
    let mut g = Graph::new(base.n() * f);
    for e in base.edges() {
        for a in 0..f {
            for b in 0..f {
                g.add_edge(e.u * f + a, e.v * f + b, 1.0)?;
            }
        }
    }
    Ok(g)
}

/// Nodes are `d`-tuples over `[f]` in mixed radix (coordinate 0 least
/// significant); two nodes are adjacent iff they differ in one coordinate.
pub fn gen_generalized_hypercube(f: usize, d: usize) -> Result<Graph> {
    if f < 2 {
        return Err(Error::InvalidParameter(
            "hypercube alphabet must have f ≥ 2".into(),
        ));
    }
    let n = hypercube_size(f, d)?;
    let mut g = Graph::new(n);
    let mut stride = 1;
    for _ in 0..d {
        for x in 0..n {
            let digit = (x / stride) % f;
            for b in digit + 1..f {
                g.add_edge(x, x + (b - digit) * stride, 1.0)?;
            }
        }
        stride *= f;
    }
    Ok(g)
}

fn hypercube_size(f: usize, d: usize) -> Result<usize> {
    let mut n: usize = 1;
    for _ in 0..d {
        n = n
            .checked_mul(f)
            .filter(|&n| n <= HYPERCUBE_MAX_NODES)
            .ok_or(Error::TooLarge {
                what: "generalized hypercube",
                size: usize::MAX,
                limit: HYPERCUBE_MAX_NODES,
            })?;
    }
    Ok(n)
}

/// Coordinates of hypercube node `x`.
pub fn hypercube_coords(f: usize, d: usize, mut x: NodeId) -> Vec<usize> {
    let mut out = Vec::with_capacity(d);
    for _ in 0..d {
        out.push(x % f);
        x /= f;
    }
    out
}

/// The single coordinate in which `u` and `v` differ, if exactly one does.
pub fn hypercube_edge_coord(f: usize, d: usize, u: NodeId, v: NodeId) -> Option<usize> {
    let (cu, cv) = (hypercube_coords(f, d, u), hypercube_coords(f, d, v));
    let mut diff = (0..d).filter(|&i| cu[i] != cv[i]);
    let first = diff.next()?;
    diff.next().is_none().then_some(first)
}

/// Small named graphs: `petersen`, `heawood`, `cycle-N`, `complete-N`, `path-N`
/// (`N` nodes).
pub fn gen_named(name: &str) -> Result<Graph> {
    let unknown = || Error::UnknownName(name.to_string());
    match name {
        "petersen" => {
            let mut edges = Vec::new();
            for i in 0..5 {
                edges.push((i, (i + 1) % 5));
                edges.push((i, i + 5));
                edges.push((5 + i, 5 + (i + 2) % 5));
            }
            Graph::from_unweighted(10, edges)
        }
        "heawood" => {
            let mut edges: Vec<(usize, usize)> = (0..14).map(|i| (i, (i + 1) % 14)).collect();
            edges.extend((0..14).step_by(2).map(|i| (i, (i + 5) % 14)));
            Graph::from_unweighted(14, edges)
        }
        _ => {
            let (family, size) = name.rsplit_once('-').ok_or_else(unknown)?;
            let k: usize = size.parse().map_err(|_| unknown())?;
            match family {
                "cycle" if k >= 3 => Graph::from_unweighted(k, (0..k).map(|i| (i, (i + 1) % k))),
                "complete" => complete(k),
                "path" if k >= 1 => Graph::from_unweighted(k, (1..k).map(|i| (i - 1, i))),
                _ => Err(unknown()),
            }
        }
    }
}

/// Shuffled copy of `0..n`, used by samplers that visit items in random order.
pub(crate) fn shuffled(n: usize, rng: &mut rng::Rng) -> Vec<usize> {
    let mut v: Vec<usize> = (0..n).collect();
    v.shuffle(rng);
    v
}
