//! Acceptance criteria, one line each. Run with
//! `cargo test -p fdspan --test acceptance`.

use std::process::ExitCode;
use std::time::Instant;

use fdspan::certificate::{check_expander_robustness, fd_certificate, CertificateParams};
use fdspan::cluster::{fd_three_spanner, size_cap};
use fdspan::fault::{
    blowup_adversarial_sets, bruteforce_verify_spanner_small, hypercube_adversarial_sets,
    sample_fault_sets, verify_certificate, verify_spanner,
};
use fdspan::generators::{
    gen_generalized_hypercube, gen_girth_blowup, gen_gnp, gen_named, gen_random_regular,
};
use fdspan::graph::{conductance_bruteforce, girth};
use fdspan::greedy::{
    greedy_fd_spanner_approx, greedy_fd_spanner_exact_with, verify_blocking_set, ExactOptions,
};
use fdspan::lbc::{
    approx_min_max_lbc, lbc_bruteforce_with, lbc_lp_solve, LbcInstance, RoundingParams,
    SearchLimits,
};
use fdspan::rng;
use fdspan::{EdgeId, Graph};
use rand::Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn fmt_err(e: fdspan::Error) -> String {
    e.to_string()
}

fn without(g: &Graph, e: EdgeId) -> Vec<EdgeId> {
    (0..g.m()).filter(|&x| x != e).collect()
}

fn blowup_exactness() -> Outcome {
    let cases = [("petersen", 2usize), ("heawood", 2), ("cycle-9", 3)];
    let mut instances = Vec::new();
    for (base, k) in cases {
        for f in 1..=3usize {
            let g = gen_girth_blowup(&gen_named(base).map_err(fmt_err)?, f).map_err(fmt_err)?;
            let out = greedy_fd_spanner_exact_with(&g, k, f as u32, ExactOptions::for_graph(&g))
                .map_err(fmt_err)?;
            check(out.edges.len() == g.m(), || {
                format!("{base} f={f}: kept {} of {}", out.edges.len(), g.m())
            })?;
            instances.push((base, k, f, g));
        }
    }
    let mut r = rng::stream(1, "acceptance-deletions");
    for _ in 0..20 {
        let (base, k, f, g) = &instances[r.gen_range(0..instances.len())];
        let e = r.gen_range(0..g.m());
        let sets = blowup_adversarial_sets(g, *f).map_err(fmt_err)?;
        let fs = sets.into_iter().find(|(id, _)| *id == e).unwrap().1;
        let c = verify_spanner(g, &without(g, e), (2 * k - 1) as f64, &[fs]).map_err(fmt_err)?;
        check(!c.violations.is_empty(), || {
            format!("{base} f={f}: deleting edge {e} went unnoticed")
        })?;
    }
    Ok("9 blow-ups kept whole; 20/20 deletions flagged".into())
}

fn hypercube_certificates() -> Outcome {
    let mut total = 0;
    for (alphabet, d) in [(2usize, 3usize), (2, 4), (3, 2)] {
        let g = gen_generalized_hypercube(alphabet, d).map_err(fmt_err)?;
        let fault_degree = (alphabet - 1) as u32;
        let cert =
            fd_certificate(&g, fault_degree, &CertificateParams::default(), 3).map_err(fmt_err)?;
        check(cert.edges.len() == g.m(), || {
            format!(
                "[{alphabet}]^{d}: certificate has {} of {} edges",
                cert.edges.len(),
                g.m()
            )
        })?;
        for (e, fs) in hypercube_adversarial_sets(&g, alphabet, d).map_err(fmt_err)? {
            let c = verify_certificate(&g, &without(&g, e), &[fs]).map_err(fmt_err)?;
            check(!c.ok(), || {
                format!("[{alphabet}]^{d}: removing edge {e} not flagged")
            })?;
            total += 1;
        }
    }
    Ok(format!(
        "outputs equal inputs; {total}/{total} single-edge removals flagged"
    ))
}

fn lbc_soundness() -> Outcome {
    let mut r = rng::stream(2, "acceptance-lbc");
    let mut ratios = Vec::new();
    let mut bound_ok = 0;
    for i in 0..200u64 {
        let n = r.gen_range(5..=12);
        let p = r.gen_range(0.3..=0.6);
        let k = r.gen_range(2..=4);
        let g = gen_gnp(n, p, rng::derive_seed(2, "acceptance-lbc-graph", i)).map_err(fmt_err)?;
        let u = r.gen_range(0..n);
        let v = (u + r.gen_range(1..n)) % n;
        let inst = LbcInstance::new(&g, u, v, k).map_err(fmt_err)?;
        let limits = SearchLimits {
            max_universe: 512,
            ..SearchLimits::default()
        };
        let exact = lbc_bruteforce_with(&inst, limits).map_err(fmt_err)?;
        let lp = lbc_lp_solve(&inst).map_err(fmt_err)?;
        let approx = approx_min_max_lbc(&inst, RoundingParams::default(), i).map_err(fmt_err)?;
        let (f_lp, f_star, f_hat) = (lp.f_lp, f64::from(exact.value), f64::from(approx.value));
        check(f_lp <= f_star + 1e-6 && f_star <= f_hat, || {
            format!("instance {i}: f_lp={f_lp} f*={f_star} f^={f_hat}")
        })?;
        check(
            inst.is_cut(&exact.fault_set) && inst.is_cut(&approx.fault_set),
            || format!("instance {i}: returned set does not cut all {k}-hop paths"),
        )?;
        let ratio = f_hat / f_star.max(1.0);
        if ratio <= 4.0 * k as f64 * (n as f64).ln() {
            bound_ok += 1;
        }
        ratios.push(ratio);
    }
    ratios.sort_by(f64::total_cmp);
    let median = (ratios[99] + ratios[100]) / 2.0;
    Ok(format!(
        "200/200 sound; median f^/max(f*,1) = {median:.3}, max = {:.3}, {bound_ok}/200 within 4k ln n",
        ratios[199]
    ))
}

fn approx_spanner_correctness() -> Outcome {
    let g = gen_gnp(100, 0.3, 4).map_err(fmt_err)?;
    let mut sizes = Vec::new();
    for k in [2usize, 3] {
        for f in [1u32, 2] {
            let out = greedy_fd_spanner_approx(&g, k, f, 1.0, 5).map_err(fmt_err)?;
            let faults = sample_fault_sets(
                &g,
                f,
                1.0,
                500,
                rng::derive_seed(6, "acceptance-approx", (k * 10) as u64 + u64::from(f)),
            );
            let c = verify_spanner(&g, &out.edges, (2 * k - 1) as f64, &faults).map_err(fmt_err)?;
            check(c.ok(), || {
                format!("k={k} f={f}: {} violations", c.violations.len())
            })?;
            sizes.push(format!("k{k}f{f}:{}", out.edges.len()));
        }
    }
    let mut done = 0;
    let mut attempt = 0u64;
    while done < 10 {
        attempt += 1;
        let h =
            gen_gnp(8, 0.55, rng::derive_seed(7, "acceptance-small", attempt)).map_err(fmt_err)?;
        if h.m() > 20 || h.m() < 8 {
            continue;
        }
        let f = 1 + (done % 2) as u32;
        let out = greedy_fd_spanner_approx(&h, 2, f, 1.0, attempt).map_err(fmt_err)?;
        let ok = bruteforce_verify_spanner_small(&h, &out.edges, 3.0, f).map_err(fmt_err)?;
        check(ok, || {
            format!(
                "small instance {attempt} (m={}, f={f}) has a counterexample",
                h.m()
            )
        })?;
        done += 1;
    }
    Ok(format!(
        "0 violations on 4x500 sampled sets (m={}, sizes {}); 10/10 exhaustive",
        g.m(),
        sizes.join(" ")
    ))
}

fn blocking_sets() -> Outcome {
    let mut done = 0;
    let mut attempt = 0u64;
    let mut entries = 0;
    while done < 50 {
        attempt += 1;
        let mut r = rng::indexed_stream(8, "acceptance-blocking", attempt);
        let n = r.gen_range(7..=12);
        let p = r.gen_range(0.3..=0.7);
        let g = gen_gnp(n, p, attempt).map_err(fmt_err)?;
        if g.m() > 50 || g.m() < 6 {
            continue;
        }
        let k = r.gen_range(2..=3usize);
        let f = r.gen_range(1..=2u32);
        let out =
            greedy_fd_spanner_exact_with(&g, k, f, ExactOptions::for_graph(&g)).map_err(fmt_err)?;
        let bs = out.blocking.ok_or("no blocking set emitted")?;
        entries += bs.entries.len();
        let ok = verify_blocking_set(&g, &out.edges, &bs, k, f).map_err(fmt_err)?;
        check(ok, || {
            format!(
                "run {attempt} (n={n}, m={}, k={k}, f={f}): blocking set rejected",
                g.m()
            )
        })?;
        done += 1;
    }
    Ok(format!("50/50 blocking sets valid ({entries} entries)"))
}

fn expander_robustness() -> Outcome {
    let mut done = 0;
    let mut attempt = 0u64;
    let mut worst = f64::INFINITY;
    while done < 30 {
        attempt += 1;
        let mut r = rng::indexed_stream(9, "acceptance-robust", attempt);
        let n = r.gen_range(10..=16);
        let p = r.gen_range(0.6..=0.95);
        let g = gen_gnp(n, p, attempt).map_err(fmt_err)?;
        let phi = conductance_bruteforce(&g).map_err(fmt_err)?;
        let f = (phi * g.min_degree() as f64 / 2.0).floor() as u32;
        if phi == 0.0 || f == 0 {
            continue;
        }
        let rep = check_expander_robustness(&g, phi, f, 100, attempt).map_err(fmt_err)?;
        check(rep.ok(), || {
            format!(
                "instance {attempt}: Φ(G∖F) = {} < Φ/2 = {}",
                rep.min_conductance,
                phi / 2.0
            )
        })?;
        worst = worst.min(rep.min_conductance / phi);
        done += 1;
    }
    Ok(format!(
        "30 instances x 100 sets: min Φ(G∖F)/Φ(G) = {worst:.3} ≥ 0.5"
    ))
}

fn three_spanner() -> Outcome {
    let g = gen_gnp(400, 0.5, 10).map_err(fmt_err)?;
    let mut parts = Vec::new();
    for f in [1u32, 2] {
        let mut covered = 0;
        let mut checked = false;
        for seed in 0..50u64 {
            let out = fd_three_spanner(&g, f, 2.0, seed).map_err(fmt_err)?;
            let cap = size_cap(g.n(), f, out.centers.len());
            check(out.edges.len() as f64 <= cap, || {
                format!(
                    "f={f} seed {seed}: {} edges above cap {cap}",
                    out.edges.len()
                )
            })?;
            if !out.coverage {
                continue;
            }
            covered += 1;
            if !checked {
                let faults = sample_fault_sets(
                    &g,
                    f,
                    1.0,
                    500,
                    rng::derive_seed(11, "acceptance-three", u64::from(f)),
                );
                let c = verify_spanner(&g, &out.edges, 3.0, &faults).map_err(fmt_err)?;
                check(c.ok(), || {
                    format!("f={f}: {} stretch-3 violations", c.violations.len())
                })?;
                parts.push(format!(
                    "f={f}: {} of {} edges, 0 violations/500",
                    out.edges.len(),
                    g.m()
                ));
                checked = true;
            }
        }
        check(covered >= 45, || {
            format!("f={f}: coverage held for only {covered}/50 seeds")
        })?;
        parts.push(format!("coverage {covered}/50"));
    }
    Ok(parts.join("; "))
}

fn certificate_size() -> Outcome {
    let mut parts = Vec::new();
    for d in [20usize, 40] {
        let g = gen_random_regular(500, d, 12 + d as u64).map_err(fmt_err)?;
        for f in [1u32, 2] {
            let cert = fd_certificate(&g, f, &CertificateParams::default(), 13).map_err(fmt_err)?;
            let n = g.n() as f64;
            let soft = 20.0 * f64::from(f) * n * n.log2().powi(2);
            check(cert.edges.len() <= g.m(), || {
                "certificate larger than input".into()
            })?;
            let faults = sample_fault_sets(
                &g,
                f,
                1.0,
                200,
                rng::derive_seed(14, "acceptance-cert", d as u64 + u64::from(f)),
            );
            let c = verify_certificate(&g, &cert.edges, &faults).map_err(fmt_err)?;
            check(c.ok(), || {
                format!(
                    "d={d} f={f}: {} connectivity violations",
                    c.violations.len()
                )
            })?;
            let stopped = cert.iterations.first().is_some_and(|it| it.stopped);
            parts.push(format!(
                "d={d} f={f}: {}/{} edges{}{}",
                cert.edges.len(),
                g.m(),
                if cert.edges.len() as f64 <= soft {
                    ""
                } else {
                    " (above soft cap)"
                },
                if stopped {
                    ", stopping rule at round 1"
                } else {
                    ""
                }
            ));
        }
    }
    Ok(parts.join("; "))
}

fn classic_degeneration() -> Outcome {
    let k50 = gen_named("complete-50").map_err(fmt_err)?;
    let out = greedy_fd_spanner_approx(&k50, 2, 0, 1.0, 15).map_err(fmt_err)?;
    let h = k50.edge_subgraph(&out.edges).map_err(fmt_err)?.graph;
    let g = girth(&h);
    check(g.is_none_or(|x| x > 4), || format!("girth {g:?}"))?;
    let cap = 50f64.powf(1.5) + 50.0;
    check(out.edges.len() as f64 <= cap, || {
        format!("{} edges above {cap}", out.edges.len())
    })?;
    let c =
        verify_spanner(&k50, &out.edges, 3.0, &[fdspan::FaultSet::empty(&k50)]).map_err(fmt_err)?;
    check(c.ok(), || "not a 3-spanner".into())?;
    Ok(format!(
        "{} edges (cap {cap:.1}), girth {:?}",
        out.edges.len(),
        g
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("1 blow-up exactness", blowup_exactness),
        ("2 hypercube certificate", hypercube_certificates),
        ("3 min-max LBC soundness", lbc_soundness),
        (
            "4 approximate spanner correctness",
            approx_spanner_correctness,
        ),
        ("5 blocking sets", blocking_sets),
        ("6 expander robustness", expander_robustness),
        ("7 fault-tolerant 3-spanner", three_spanner),
        ("8 certificate size", certificate_size),
        ("9 f=0 degeneration", classic_degeneration),
    ];
    let results: Vec<(Outcome, f64)> = std::thread::scope(|scope| {
        let handles: Vec<_> = criteria
            .iter()
            .map(|&(_, run)| {
                scope.spawn(move || {
                    let start = Instant::now();
                    let out = run();
                    (out, start.elapsed().as_secs_f64())
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().unwrap_or_else(|_| (Err("panicked".into()), 0.0)))
            .collect()
    });
    let mut failed = 0;
    for ((name, _), (out, secs)) in criteria.iter().zip(results) {
        match out {
            Ok(msg) => println!("PASS criterion {name}: {msg} [{secs:.1}s]"),
            Err(msg) => {
                failed += 1;
                println!("FAIL criterion {name}: {msg} [{secs:.1}s]");
            }
        }
    }
    println!("acceptance: {}/9 passed", 9 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
