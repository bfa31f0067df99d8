use std::ops::ControlFlow;
use std::path::Path;

use anyhow::{anyhow, bail, ensure, Context as _, Result};
use fdspan::certificate::{fd_certificate, CertificateParams};
use fdspan::cluster::{fd_three_spanner_certified, size_cap};
use fdspan::fault::{
    blowup_adversarial_sets, find_spanner_counterexample, for_each_valid_fault_set,
    hypercube_adversarial_sets, sample_fault_sets, verify_certificate, verify_spanner,
    EXHAUSTIVE_MAX_EDGES,
};
use fdspan::generators::{
    gen_generalized_hypercube, gen_girth_blowup, gen_gnp, gen_named, gen_random_regular,
};
use fdspan::graph::{parse_fault_file, write_edge_list};
use fdspan::greedy::{
    greedy_fd_spanner_approx_with, greedy_fd_spanner_exact_with, spanner_size_report,
    ApproxOptions, ExactOptions, GreedyOutput,
};
use fdspan::lbc::{
    approx_min_max_lbc, lbc_bruteforce_with, lbc_lp_solve, relevant_universe, LbcInstance,
    RoundingParams, SearchLimits, DEFAULT_MAX_UNIVERSE,
};
use fdspan::{EdgeId, FaultSet, Graph};
use serde_json::{json, Value};

use crate::config::{pick, Config};
use crate::report::{
    read_graph, read_subgraph, sidecar, write_json, write_subgraph, write_text, Timer,
};
use crate::{
    AdversaryFamily, Algo, BuildArgs, Family, GenArgs, Kind, LbcArgs, LbcMode, Mode, VerifyArgs,
};

/// Default input cap for `build --algo greedy-exact`.
pub const EXACT_MAX_EDGES: usize = 5000;
pub const DEFAULT_SAMPLES: usize = 200;

pub struct Context {
    pub config: Config,
    pub omit_timing: bool,
}

impl Context {
    pub fn new(config: Option<&Path>, omit_timing: bool) -> Result<Self> {
        Ok(Self {
            config: Config::load(config)?,
            omit_timing,
        })
    }

    pub fn timer(&self) -> Timer {
        Timer::start(self.omit_timing)
    }
}

fn need<T>(value: Option<T>, flag: &str, family: &str) -> Result<T> {
    value.ok_or_else(|| anyhow!("`gen {family}` needs --{flag}"))
}

pub fn gen(ctx: &Context, args: GenArgs) -> Result<bool> {
    let seed = ctx.config.seed(args.seed)?;
    let (g, params) = match args.family {
        Family::Gnp => {
            let (n, p) = (need(args.n, "n", "gnp")?, need(args.p, "p", "gnp")?);
            (gen_gnp(n, p, seed)?, json!({ "n": n, "p": p }))
        }
        Family::Regular => {
            let (n, d) = (need(args.n, "n", "regular")?, need(args.d, "d", "regular")?);
            (gen_random_regular(n, d, seed)?, json!({ "n": n, "d": d }))
        }
        Family::Blowup => {
            let base = need(args.base, "base", "blowup")?;
            let f = need(args.f, "f", "blowup")?;
            (
                gen_girth_blowup(&gen_named(&base)?, f)?,
                json!({ "base": base, "f": f }),
            )
        }
        Family::Hypercube => {
            let (f, d) = (
                need(args.f, "f", "hypercube")?,
                need(args.d, "d", "hypercube")?,
            );
            (gen_generalized_hypercube(f, d)?, json!({ "f": f, "d": d }))
        }
        Family::Named => {
            let name = need(args.name, "name", "named")?;
            (gen_named(&name)?, json!({ "name": name }))
        }
    };
    write_text(&args.out, &write_edge_list(&g))?;
    let manifest = json!({
        "family": args.family,
        "params": params,
        "seed": seed,
        "n": g.n(),
        "m": g.m(),
    });
    write_json(&manifest, Some(&sidecar(&args.out, ".manifest.json")))?;
    Ok(true)
}

fn rounding(ctx: &Context, a: Option<f64>, retries: Option<usize>) -> RoundingParams {
    let d = RoundingParams::default();
    RoundingParams {
        a: pick(a, ctx.config.a, d.a),
        retries: pick(retries, ctx.config.retries, d.retries),
        max_doublings: pick(None, ctx.config.max_doublings, d.max_doublings),
    }
}

fn greedy_details(g: &Graph, out: &GreedyOutput, k: usize, f: u32) -> Value {
    json!({
        "stats": out.stats,
        "size": spanner_size_report(g, &out.edges, k, f),
    })
}

pub fn build(ctx: &Context, args: BuildArgs) -> Result<bool> {
    let timer = ctx.timer();
    let g = read_graph(&args.graph)?;
    let seed = ctx.config.seed(args.seed)?;
    let (k, f) = (args.k, args.f);
    let mut blocking = None;
    // (edges, params, algorithm-specific details, stretch to check or None for connectivity)
    let (edges, params, details, stretch): (Vec<EdgeId>, Value, Value, Option<f64>) =
        match args.algo {
            Algo::GreedyExact => {
                let max_edges = pick(args.max_edges, ctx.config.max_edges, EXACT_MAX_EDGES);
                if g.m() > max_edges {
                    return Err(fdspan::Error::TooLarge {
                        what: "input for greedy-exact",
                        size: g.m(),
                        limit: max_edges,
                    })
                    .context("use --algo greedy-approx or raise --max-edges");
                }
                let out = greedy_fd_spanner_exact_with(&g, k, f, ExactOptions::for_graph(&g))?;
                let details = greedy_details(&g, &out, k, f);
                blocking = out.blocking;
                (
                    out.edges,
                    json!({ "k": k, "f": f, "max_edges": max_edges }),
                    details,
                    Some((2 * k - 1) as f64),
                )
            }
            Algo::GreedyApprox => {
                let b = pick(args.b, ctx.config.b, 1.0);
                let mut opts = ApproxOptions::for_graph(&g, b, seed);
                opts.rounding = rounding(ctx, args.a, args.retries);
                let out = greedy_fd_spanner_approx_with(&g, k, f, opts)?;
                let details = greedy_details(&g, &out, k, f);
                blocking = out.blocking;
                let params = json!({
                    "k": k, "f": f, "B": b,
                    "A": opts.rounding.a, "retries": opts.rounding.retries,
                    "max_doublings": opts.rounding.max_doublings,
                });
                (out.edges, params, details, Some((2 * k - 1) as f64))
            }
            Algo::Cluster3 => {
                let c_sample = pick(args.c_sample, ctx.config.c_sample, 2.0);
                let out = fd_three_spanner_certified(&g, f, c_sample, seed)?;
                let details = json!({
                    "centers": out.centers.len(),
                    "coverage": out.coverage,
                    "seed_used": out.seed,
                    "size_cap": size_cap(g.n(), f, out.centers.len()),
                });
                (
                    out.edges,
                    json!({ "f": f, "c_sample": c_sample }),
                    details,
                    Some(3.0),
                )
            }
            Algo::Certificate => {
                let defaults = CertificateParams::default();
                let cp = CertificateParams {
                    phi: pick(args.phi, ctx.config.phi, defaults.phi),
                    c_deg: pick(args.c_deg, ctx.config.c_deg, defaults.c_deg),
                    theory_constants: args.theory_constants,
                };
                let out = fd_certificate(&g, f, &cp, seed)?;
                let details = json!({
                    "thresholds": out.thresholds,
                    "iterations": out.iterations,
                    "leftover_edges": out.leftover_edges,
                });
                (
                    out.edges,
                    json!({ "f": f, "certificate": cp }),
                    details,
                    None,
                )
            }
        };

    let check = if args.check_samples > 0 {
        let faults = sample_fault_sets(
            &g,
            f,
            1.0,
            args.check_samples,
            fdspan::rng::derive_seed(seed, "build-check", 0),
        );
        Some(match stretch {
            Some(t) => {
                let c = verify_spanner(&g, &edges, t, &faults)?;
                json!({ "kind": "spanner", "t": t, "fault_sets": c.num_faultsets,
                        "violations": c.violations.len(), "worst_ratio": c.worst_ratio })
            }
            None => {
                let c = verify_certificate(&g, &edges, &faults)?;
                json!({ "kind": "certificate", "fault_sets": c.num_faultsets, "violations": c.violations.len() })
            }
        })
    } else {
        None
    };
    let ok = check.as_ref().is_none_or(|c| c["violations"] == 0);

    if let Some(path) = &args.out {
        write_subgraph(&g, &edges, path)?;
    }
    if let (Some(path), Some(bs)) = (&args.blocking, &blocking) {
        write_json(&serde_json::to_value(&bs.entries)?, Some(path))?;
    }
    let mut report = json!({
        "algorithm": args.algo,
        "graph": { "n": g.n(), "m": g.m() },
        "params": params,
        "seed": seed,
        "output_edges": edges.len(),
        "details": details,
        "check": check,
    });
    timer.stamp(&mut report);
    write_json(&report, args.report.as_deref())?;
    Ok(ok)
}

fn adversarial_sets(g: &Graph, args: &VerifyArgs) -> Result<Vec<FaultSet>> {
    let family = args
        .family
        .ok_or_else(|| anyhow!("adversarial mode needs --family blowup|hypercube"))?;
    let ff = args
        .family_f
        .ok_or_else(|| anyhow!("adversarial mode needs --family-f"))?;
    let sets = match family {
        AdversaryFamily::Blowup => blowup_adversarial_sets(g, ff)?,
        AdversaryFamily::Hypercube => {
            let d = args
                .d
                .ok_or_else(|| anyhow!("hypercube adversarial mode needs --d"))?;
            hypercube_adversarial_sets(g, ff, d)?
        }
    };
    Ok(sets.into_iter().map(|(_, fs)| fs).collect())
}

pub fn verify(ctx: &Context, args: VerifyArgs) -> Result<bool> {
    let timer = ctx.timer();
    let g = read_graph(&args.graph)?;
    let h = read_subgraph(&g, &args.sub)?;
    let seed = ctx.config.seed(args.seed)?;
    let samples = pick(args.samples, ctx.config.samples, DEFAULT_SAMPLES);
    let density = pick(args.density, ctx.config.density, 1.0);
    ensure!(args.t >= 1.0, "stretch t must be at least 1");

    let mut report = json!({
        "kind": args.kind,
        "mode": args.mode,
        "graph": { "n": g.n(), "m": g.m() },
        "subgraph_edges": h.len(),
        "params": { "t": args.t, "f": args.f, "samples": samples, "density": density },
        "seed": seed,
    });

    if args.mode == Mode::Exhaustive {
        if g.m() > EXHAUSTIVE_MAX_EDGES {
            return Err(fdspan::Error::TooLarge {
                what: "graph for exhaustive verification",
                size: g.m(),
                limit: EXHAUSTIVE_MAX_EDGES,
            }
            .into());
        }
        let counterexample = match args.kind {
            Kind::Spanner => find_spanner_counterexample(&g, &h, args.t, args.f)?
                .map(|c| json!({ "faults": c.faults, "edge": c.edge, "ratio": c.ratio })),
            Kind::Certificate => {
                let mut first_err = None;
                let hit = for_each_valid_fault_set(&g, args.f, |fs| {
                    match verify_certificate(&g, &h, std::slice::from_ref(fs)) {
                        Ok(c) if c.ok() => ControlFlow::Continue(()),
                        Ok(c) => ControlFlow::Break(
                            json!({ "faults": fs, "edge": c.violations[0].edge }),
                        ),
                        Err(e) => {
                            first_err = Some(e);
                            ControlFlow::Break(Value::Null)
                        }
                    }
                });
                if let Some(e) = first_err {
                    return Err(e.into());
                }
                hit
            }
        };
        let ok = counterexample.is_none();
        report["violations"] = json!(usize::from(!ok));
        report["counterexample"] = counterexample.unwrap_or(Value::Null);
        timer.stamp(&mut report);
        write_json(&report, args.report.as_deref())?;
        return Ok(ok);
    }

    let faults = if let Some(path) = &args.faults {
        let text =
            std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let fs = parse_fault_file(&g, &text)?;
        if !fs.is_valid(args.f) {
            bail!(fdspan::Error::Precondition(format!(
                "fault set has faulty-degree {} above f = {}",
                fs.max_degree(),
                args.f
            )));
        }
        vec![fs]
    } else {
        match args.mode {
            Mode::Sampled => sample_fault_sets(&g, args.f, density, samples, seed),
            Mode::Adversarial => adversarial_sets(&g, &args)?,
            Mode::Exhaustive => unreachable!(),
        }
    };

    let ok = match args.kind {
        Kind::Spanner => {
            let c = verify_spanner(&g, &h, args.t, &faults)?;
            report["fault_sets"] = json!(c.num_faultsets);
            report["violations"] = json!(c.violations.len());
            report["worst_ratio"] = json!(c.worst_ratio);
            report["first_violations"] = json!(c.violations.iter().take(20).collect::<Vec<_>>());
            c.ok()
        }
        Kind::Certificate => {
            let c = verify_certificate(&g, &h, &faults)?;
            report["fault_sets"] = json!(c.num_faultsets);
            report["violations"] = json!(c.violations.len());
            report["first_violations"] = json!(c.violations.iter().take(20).collect::<Vec<_>>());
            c.ok()
        }
    };
    timer.stamp(&mut report);
    write_json(&report, args.report.as_deref())?;
    Ok(ok)
}

pub fn lbc(ctx: &Context, args: LbcArgs) -> Result<bool> {
    let timer = ctx.timer();
    let g = read_graph(&args.graph)?;
    let seed = ctx.config.seed(args.seed)?;
    let inst = LbcInstance::new(&g, args.u, args.v, args.k)?;
    let universe = relevant_universe(&inst).len();
    let mut meta = json!({
        "mode": args.mode, "u": args.u, "v": args.v, "k": args.k,
        "seed": seed, "universe": universe,
    });
    let (value, edges, f_lp) = match args.mode {
        LbcMode::Exact => {
            let limits = SearchLimits {
                max_universe: pick(
                    args.max_universe,
                    ctx.config.max_universe,
                    DEFAULT_MAX_UNIVERSE,
                ),
                ..SearchLimits::default()
            };
            let cut = lbc_bruteforce_with(&inst, limits)?;
            (json!(cut.value), cut.fault_set.to_vec(), Value::Null)
        }
        LbcMode::Lp => {
            let lp = lbc_lp_solve(&inst)?;
            let support: Vec<Value> =
                lp.c.iter()
                    .enumerate()
                    .filter(|(_, &c)| c > 0.0)
                    .map(|(e, &c)| json!([e, c]))
                    .collect();
            meta["c"] = json!(support);
            meta["path_constraints"] = json!(lp.path_constraints);
            (json!(lp.f_lp), Vec::new(), json!(lp.f_lp))
        }
        LbcMode::Approx => {
            let params = rounding(ctx, args.a, args.retries);
            let cut = approx_min_max_lbc(&inst, params, seed)?;
            meta["rounding"] = json!(cut.rounding);
            let f_lp = cut
                .fractional
                .as_ref()
                .map_or(Value::Null, |fr| json!(fr.f_lp));
            (json!(cut.value), cut.fault_set.to_vec(), f_lp)
        }
    };
    timer.stamp(&mut meta);
    write_json(
        &json!({ "value": value, "edges": edges, "f_lp": f_lp, "meta": meta }),
        None,
    )?;
    Ok(true)
}
