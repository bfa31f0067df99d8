//! Named benchmark suites. Each produces one row per instance, written as CSV
//! plus a JSON aggregate (mean/min/max per column).

use anyhow::{bail, Result};
use fdspan::certificate::check_expander_robustness;
use fdspan::generators::{gen_girth_blowup, gen_gnp, gen_named};
use fdspan::graph::conductance_bruteforce;
use fdspan::greedy::{greedy_fd_spanner_exact_with, ExactOptions};
use fdspan::lbc::{
    approx_min_max_lbc, lbc_bruteforce_with, lbc_lp_solve, LbcInstance, RoundingParams,
    SearchLimits,
};
use fdspan::rng::derive_seed;
use rayon::prelude::*;
use serde_json::{json, Map, Value};

use crate::commands::Context;
use crate::report::{sidecar, write_json, write_text, Timer};
use crate::BenchArgs;

pub const SUITES: [&str; 3] = ["lbc-ratio", "blowup-exactness", "robustness"];

struct Row {
    values: Vec<(&'static str, f64)>,
    pass: bool,
}

fn lbc_row(i: usize, seed: u64) -> Result<Row> {
    let n = 6 + i % 7;
    let p = 0.3 + 0.1 * (i % 4) as f64;
    let k = 2 + i % 3;
    let g = gen_gnp(n, p, seed)?;
    let inst = LbcInstance::new(&g, 0, n - 1, k)?;
    let limits = SearchLimits {
        max_universe: 256,
        ..SearchLimits::default()
    };
    let exact = lbc_bruteforce_with(&inst, limits)?;
    let lp = lbc_lp_solve(&inst)?;
    let approx = approx_min_max_lbc(&inst, RoundingParams::default(), seed)?;
    let (f_lp, f_star, f_hat) = (lp.f_lp, f64::from(exact.value), f64::from(approx.value));
    Ok(Row {
        values: vec![
            ("instance", i as f64),
            ("n", n as f64),
            ("m", g.m() as f64),
            ("k", k as f64),
            ("f_lp", f_lp),
            ("f_star", f_star),
            ("f_hat", f_hat),
            ("ratio", f_hat / f_star.max(1.0)),
        ],
        pass: f_lp <= f_star + 1e-6 && f_star <= f_hat && inst.is_cut(&approx.fault_set),
    })
}

fn blowup_rows() -> Result<Vec<Row>> {
    let cases = [("petersen", 2), ("heawood", 2), ("cycle-9", 3)];
    let mut jobs = Vec::new();
    for (bi, (base, k)) in cases.iter().enumerate() {
        for f in 1..=3usize {
            jobs.push((bi, *base, *k, f));
        }
    }
    jobs.par_iter()
        .map(|&(bi, base, k, f)| {
            let g = gen_girth_blowup(&gen_named(base)?, f)?;
            let out = greedy_fd_spanner_exact_with(&g, k, f as u32, ExactOptions::for_graph(&g))?;
            Ok(Row {
                values: vec![
                    ("base", bi as f64),
                    ("k", k as f64),
                    ("f", f as f64),
                    ("m", g.m() as f64),
                    ("kept", out.edges.len() as f64),
                ],
                pass: out.edges.len() == g.m(),
            })
        })
        .collect()
}

fn robustness_row(i: usize, seed: u64) -> Result<Row> {
    let n = 8 + i % 9;
    let g = gen_gnp(n, 0.8, seed)?;
    let phi = conductance_bruteforce(&g)?;
    let f = if phi > 0.0 {
        (phi * g.min_degree() as f64 / 2.0).floor() as u32
    } else {
        0
    };
    if phi == 0.0 {
        // disconnected draw: nothing to certify
        return Ok(Row {
            values: vec![
                ("instance", i as f64),
                ("n", n as f64),
                ("phi", 0.0),
                ("f", 0.0),
                ("min_ratio", 1.0),
            ],
            pass: true,
        });
    }
    let r = check_expander_robustness(&g, phi, f, 100, seed)?;
    Ok(Row {
        values: vec![
            ("instance", i as f64),
            ("n", n as f64),
            ("phi", phi),
            ("f", f64::from(f)),
            ("min_ratio", r.min_conductance / phi),
        ],
        pass: r.ok(),
    })
}

fn aggregate(rows: &[Row]) -> Value {
    let mut metrics = Map::new();
    if let Some(first) = rows.first() {
        for (j, (name, _)) in first.values.iter().enumerate() {
            let col: Vec<f64> = rows.iter().map(|r| r.values[j].1).collect();
            let mean = col.iter().sum::<f64>() / col.len() as f64;
            let min = col.iter().copied().fold(f64::INFINITY, f64::min);
            let max = col.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            metrics.insert(
                (*name).to_string(),
                json!({ "mean": mean, "min": min, "max": max }),
            );
        }
    }
    Value::Object(metrics)
}

fn to_csv(rows: &[Row]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    if let Some(first) = rows.first() {
        let mut header: Vec<&str> = first.values.iter().map(|(n, _)| *n).collect();
        header.push("pass");
        w.write_record(&header)?;
    }
    for r in rows {
        let mut rec: Vec<String> = r.values.iter().map(|(_, v)| v.to_string()).collect();
        rec.push(r.pass.to_string());
        w.write_record(&rec)?;
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}

pub fn run(ctx: &Context, args: BenchArgs) -> Result<bool> {
    let timer = Timer::start(ctx.omit_timing);
    let root = ctx.config.seed(args.seed)?;
    let per_seed = |label: &'static str, f: fn(usize, u64) -> Result<Row>| -> Result<Vec<Row>> {
        (0..args.seeds)
            .into_par_iter()
            .map(|i| f(i, derive_seed(root, label, i as u64)))
            .collect()
    };
    let rows = match args.suite.as_str() {
        "lbc-ratio" => per_seed("bench-lbc", lbc_row)?,
        "blowup-exactness" => blowup_rows()?,
        "robustness" => per_seed("bench-robustness", robustness_row)?,
        "" => bail!(fdspan::Error::InvalidParameter(format!(
            "empty suite name; choose one of {}",
            SUITES.join(", ")
        ))),
        other => bail!(fdspan::Error::InvalidParameter(format!(
            "unknown suite `{other}`; choose one of {}",
            SUITES.join(", ")
        ))),
    };
    let failures = rows.iter().filter(|r| !r.pass).count();
    let mut summary = json!({
        "suite": args.suite,
        "seeds": args.seeds,
        "seed": root,
        "rows": rows.len(),
        "failures": failures,
        "metrics": aggregate(&rows),
    });
    timer.stamp(&mut summary);
    match &args.out {
        Some(prefix) => {
            write_text(&sidecar(prefix, ".csv"), &to_csv(&rows)?)?;
            write_json(&summary, Some(&sidecar(prefix, ".json")))?;
        }
        None => write_json(&summary, None)?,
    }
    Ok(failures == 0)
}
