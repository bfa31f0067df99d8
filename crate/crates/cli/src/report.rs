//! Writing edge lists, JSON reports and structured errors.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{Context, Result};
use fdspan::graph::{parse_edge_list, write_edge_list};
use fdspan::{EdgeId, Graph};
use serde_json::{json, Value};

pub fn read_graph(path: &Path) -> Result<Graph> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_edge_list(&text).with_context(|| format!("parsing {}", path.display()))
}

/// Edge ids of `sub` in `g`; every edge of `sub` must exist in `g`.
pub fn read_subgraph(g: &Graph, path: &Path) -> Result<Vec<EdgeId>> {
    let sub = read_graph(path)?;
    anyhow::ensure!(
        sub.n() == g.n(),
        "{} has {} nodes, the graph has {}",
        path.display(),
        sub.n(),
        g.n()
    );
    let mut ids = sub
        .edges()
        .iter()
        .map(|e| {
            g.find_edge(e.u, e.v)
                .ok_or(fdspan::Error::MissingEdge(e.u, e.v))
                .with_context(|| format!("{} is not a subgraph", path.display()))
        })
        .collect::<Result<Vec<_>>>()?;
    ids.sort_unstable();
    Ok(ids)
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

pub fn write_subgraph(g: &Graph, edges: &[EdgeId], path: &Path) -> Result<()> {
    let mut sorted = edges.to_vec();
    sorted.sort_unstable();
    write_text(path, &write_edge_list(&g.edge_subgraph(&sorted)?.graph))
}

pub fn write_json(value: &Value, path: Option<&Path>) -> Result<()> {
    let text = serde_json::to_string_pretty(value)? + "\n";
    match path {
        Some(p) => write_text(p, &text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

pub fn sidecar(path: &Path, suffix: &str) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

/// Wall-clock timer whose reading is dropped under `--omit-timing`.
pub struct Timer {
    start: Instant,
    omit: bool,
}

impl Timer {
    pub fn start(omit: bool) -> Self {
        Self {
            start: Instant::now(),
            omit,
        }
    }

    /// Inserts `runtime_ms` into `report` unless timing is omitted.
    pub fn stamp(&self, report: &mut Value) {
        if !self.omit {
            report["runtime_ms"] = json!(self.start.elapsed().as_secs_f64() * 1e3);
        }
    }
}

fn error_kind(err: &anyhow::Error) -> &'static str {
    use fdspan::Error as E;
    match err.chain().find_map(|c| c.downcast_ref::<fdspan::Error>()) {
        Some(E::NodeOutOfRange { .. } | E::EdgeOutOfRange { .. }) => "out_of_range",
        Some(E::SelfLoop(_) | E::DuplicateEdge(..) | E::InvalidWeight(_)) => "invalid_graph",
        Some(E::MissingEdge(..) | E::NotASubgraph(_)) => "not_a_subgraph",
        Some(E::TooLarge { .. }) => "too_large",
        Some(E::InvalidParameter(_)) => "invalid_parameter",
        Some(E::Precondition(_)) => "precondition",
        Some(E::Disconnected) => "disconnected",
        Some(E::UnknownName(_)) => "unknown_name",
        Some(E::RegularGenerationFailed { .. }) => "generation_failed",
        Some(E::RoundingFailed(_)) => "rounding_failed",
        Some(E::SearchBudgetExceeded { .. }) => "search_budget",
        Some(E::Lp(_)) => "lp",
        Some(E::Eigen(_)) => "eigen",
        Some(E::Parse { .. }) => "parse",
        Some(E::Io(_)) => "io",
        None => "error",
    }
}

/// Prints `{"error": {kind, message}}` to stderr; exit code 2.
pub fn fail(err: &anyhow::Error) -> ExitCode {
    let value = json!({ "error": { "kind": error_kind(err), "message": format!("{err:#}") } });
    eprintln!("{value}");
    ExitCode::from(2)
}
