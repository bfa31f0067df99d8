use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn fdspan(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fdspan"))
        .args(args)
        .env_remove("FDSPAN_SEED")
        .output()
        .expect("binary runs")
}

fn json_stdout(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "bad JSON ({e}): {}\nstderr: {}",
            String::from_utf8_lossy(&out.stdout),
            String::from_utf8_lossy(&out.stderr)
        )
    })
}

fn path(dir: &TempDir, name: &str) -> PathBuf {
    dir.path().join(name)
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn header(p: &Path) -> (usize, usize) {
    let text = std::fs::read_to_string(p).unwrap();
    let mut it = text.lines().next().unwrap().split_whitespace();
    (
        it.next().unwrap().parse().unwrap(),
        it.next().unwrap().parse().unwrap(),
    )
}

fn gen(dir: &TempDir, name: &str, args: &[&str]) -> PathBuf {
    let out = path(dir, name);
    let mut all = vec!["gen"];
    all.extend_from_slice(args);
    all.extend_from_slice(&["--out", s(&out)]);
    let res = fdspan(&all);
    assert!(
        res.status.success(),
        "{}",
        String::from_utf8_lossy(&res.stderr)
    );
    out
}

#[test]
fn gen_examples() {
    let dir = TempDir::new().unwrap();
    let q4 = gen(&dir, "q4.txt", &["hypercube", "--f", "2", "--d", "4"]);
    assert_eq!(header(&q4), (16, 32));
    let manifest: Value = serde_json::from_str(
        &std::fs::read_to_string(dir.path().join("q4.txt.manifest.json")).unwrap(),
    )
    .unwrap();
    assert_eq!(manifest["family"], "hypercube");
    assert_eq!(manifest["params"]["d"], 4);
    let b = gen(&dir, "b.txt", &["blowup", "--base", "petersen", "--f", "2"]);
    assert_eq!(header(&b), (20, 60));
    let c = gen(&dir, "c.txt", &["named", "--name", "cycle-7"]);
    assert_eq!(header(&c), (7, 7));
}

#[test]
fn gen_rejects_missing_parameters() {
    let dir = TempDir::new().unwrap();
    let out = fdspan(&["gen", "gnp", "--n", "10", "--out", s(&path(&dir, "g.txt"))]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn certificate_of_hypercube_is_the_hypercube() {
    let dir = TempDir::new().unwrap();
    let q4 = gen(&dir, "q4.txt", &["hypercube", "--f", "2", "--d", "4"]);
    let cert = path(&dir, "cert.txt");
    let out = fdspan(&[
        "build",
        "--algo",
        "certificate",
        "--f",
        "1",
        "--graph",
        s(&q4),
        "--out",
        s(&cert),
    ]);
    assert!(out.status.success());
    let report = json_stdout(&out);
    assert_eq!(report["output_edges"], 32);
    assert_eq!(header(&cert), (16, 32));

    // the adversarial coordinate sets accept the certificate
    let verify = fdspan(&[
        "verify",
        "--graph",
        s(&q4),
        "--sub",
        s(&cert),
        "--kind",
        "certificate",
        "--mode",
        "adversarial",
        "--family",
        "hypercube",
        "--family-f",
        "2",
        "--d",
        "4",
        "--f",
        "1",
    ]);
    assert!(verify.status.success());
    assert_eq!(json_stdout(&verify)["violations"], 0);
}

#[test]
fn greedy_approx_report_has_size_runtime_and_seed() {
    let dir = TempDir::new().unwrap();
    let g = gen(
        &dir,
        "g.txt",
        &["gnp", "--n", "100", "--p", "0.3", "--seed", "4"],
    );
    let out = fdspan(&[
        "build",
        "--algo",
        "greedy-approx",
        "--k",
        "2",
        "--f",
        "2",
        "--graph",
        s(&g),
        "--seed",
        "11",
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let r = json_stdout(&out);
    assert_eq!(r["seed"], 11);
    assert!(r["output_edges"].as_u64().unwrap() > 0);
    assert!(r["runtime_ms"].as_f64().is_some());
    assert_eq!(r["params"]["B"], 1.0);
}

#[test]
fn greedy_exact_rejects_oversize_input() {
    let dir = TempDir::new().unwrap();
    let g = gen(&dir, "g.txt", &["gnp", "--n", "200", "--p", "0.5"]);
    let out = fdspan(&["build", "--algo", "greedy-exact", "--graph", s(&g)]);
    assert_eq!(out.status.code(), Some(2));
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"]["kind"], "too_large");
}

#[test]
fn verify_outcomes_set_the_exit_code() {
    let dir = TempDir::new().unwrap();
    let b = gen(&dir, "b.txt", &["blowup", "--base", "petersen", "--f", "2"]);
    let same = fdspan(&[
        "verify",
        "--graph",
        s(&b),
        "--sub",
        s(&b),
        "--f",
        "2",
        "--t",
        "3",
        "--samples",
        "50",
    ]);
    assert!(same.status.success());
    assert_eq!(json_stdout(&same)["violations"], 0);

    // drop the last edge
    let text = std::fs::read_to_string(&b).unwrap();
    let mut lines: Vec<&str> = text.lines().collect();
    lines.pop();
    lines[0] = "20 59 0";
    let minus = path(&dir, "minus.txt");
    std::fs::write(&minus, lines.join("\n")).unwrap();
    let adv = fdspan(&[
        "verify",
        "--graph",
        s(&b),
        "--sub",
        s(&minus),
        "--mode",
        "adversarial",
        "--family",
        "blowup",
        "--family-f",
        "2",
        "--f",
        "2",
        "--t",
        "3",
    ]);
    assert_eq!(adv.status.code(), Some(1));
    assert!(json_stdout(&adv)["violations"].as_u64().unwrap() >= 1);
}

#[test]
fn tree_subgraph_fails_exact_distances() {
    let dir = TempDir::new().unwrap();
    let g = path(&dir, "w.txt");
    std::fs::write(&g, "3 3 1\n0 1 1\n1 2 1\n0 2 1.5\n").unwrap();
    let mst = path(&dir, "mst.txt");
    std::fs::write(&mst, "3 2 1\n0 1 1\n1 2 1\n").unwrap();
    let out = fdspan(&[
        "verify",
        "--graph",
        s(&g),
        "--sub",
        s(&mst),
        "--f",
        "0",
        "--t",
        "1",
        "--samples",
        "3",
    ]);
    assert_eq!(out.status.code(), Some(1));

    let exhaustive = fdspan(&[
        "verify",
        "--graph",
        s(&g),
        "--sub",
        s(&mst),
        "--mode",
        "exhaustive",
        "--f",
        "0",
        "--t",
        "1",
    ]);
    assert_eq!(exhaustive.status.code(), Some(1));
    assert!(!json_stdout(&exhaustive)["counterexample"].is_null());
}

#[test]
fn reruns_are_byte_identical_without_timing() {
    let dir = TempDir::new().unwrap();
    let g = gen(
        &dir,
        "g.txt",
        &["gnp", "--n", "60", "--p", "0.5", "--seed", "2"],
    );
    let run = || {
        fdspan(&[
            "build",
            "--algo",
            "cluster3",
            "--f",
            "1",
            "--c-sample",
            "0.5",
            "--graph",
            s(&g),
            "--seed",
            "3",
            "--omit-timing",
            "--check-samples",
            "20",
        ])
    };
    let (a, b) = (run(), run());
    assert!(a.status.success(), "{}", String::from_utf8_lossy(&a.stderr));
    assert_eq!(a.stdout, b.stdout);
    assert!(json_stdout(&a).get("runtime_ms").is_none());
}

#[test]
fn seed_precedence() {
    let dir = TempDir::new().unwrap();
    let cfg = path(&dir, "cfg.toml");
    std::fs::write(&cfg, "seed = 7\nc_sample = 0.5\n").unwrap();
    let g = gen(&dir, "g.txt", &["gnp", "--n", "40", "--p", "0.5"]);
    let build = |extra: &[&str], env: Option<&str>| {
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_fdspan"));
        cmd.args([
            "build",
            "--algo",
            "cluster3",
            "--graph",
            s(&g),
            "--omit-timing",
        ])
        .args(extra);
        match env {
            Some(v) => cmd.env("FDSPAN_SEED", v),
            None => cmd.env_remove("FDSPAN_SEED"),
        };
        json_stdout(&cmd.output().unwrap())
    };
    let with_cfg = build(&["--config", s(&cfg)], Some("99"));
    assert_eq!(with_cfg["seed"], 7);
    assert_eq!(with_cfg["params"]["c_sample"], 0.5);
    assert_eq!(
        build(&["--config", s(&cfg), "--seed", "1"], None)["seed"],
        1
    );
    assert_eq!(build(&[], Some("99"))["seed"], 99);
    assert_eq!(build(&[], None)["seed"], 0);
}

#[test]
fn lbc_modes_emit_cut_json() {
    let dir = TempDir::new().unwrap();
    let g = gen(&dir, "p.txt", &["named", "--name", "petersen"]);
    let mut values = Vec::new();
    for mode in ["exact", "lp", "approx"] {
        let out = fdspan(&[
            "lbc",
            "--graph",
            s(&g),
            "--u",
            "0",
            "--v",
            "7",
            "--k",
            "3",
            "--mode",
            mode,
        ]);
        assert!(
            out.status.success(),
            "{}",
            String::from_utf8_lossy(&out.stderr)
        );
        let v = json_stdout(&out);
        for key in ["value", "edges", "f_lp", "meta"] {
            assert!(v.get(key).is_some(), "{mode} lacks {key}");
        }
        values.push(v["value"].as_f64().unwrap());
    }
    // f_lp ≤ f* ≤ f̂
    assert!(values[1] <= values[0] + 1e-9 && values[0] <= values[2]);
}

#[test]
fn bench_writes_csv_and_aggregate() {
    let dir = TempDir::new().unwrap();
    let prefix = path(&dir, "lbc");
    let out = fdspan(&[
        "bench",
        "lbc-ratio",
        "--seeds",
        "6",
        "--out",
        s(&prefix),
        "--omit-timing",
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let csv = std::fs::read_to_string(dir.path().join("lbc.csv")).unwrap();
    assert_eq!(csv.lines().count(), 7);
    assert!(csv.starts_with("instance,n,m,k,f_lp,f_star,f_hat,ratio,pass"));
    let agg: Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("lbc.json")).unwrap())
            .unwrap();
    assert_eq!(agg["failures"], 0);
    assert!(agg["metrics"]["ratio"]["max"].as_f64().unwrap() >= 1.0 - 1e-9);

    let bad = fdspan(&["bench", "no-such-suite"]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn blowup_bench_passes() {
    let out = fdspan(&["bench", "blowup-exactness", "--omit-timing"]);
    assert!(out.status.success());
    assert_eq!(json_stdout(&out)["rows"], 9);
}
