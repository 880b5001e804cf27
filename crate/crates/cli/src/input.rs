//! File and argument ingestion shared by the subcommands.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::Path;

use zforce_core::oracle::EigenClass;
use zforce_core::sgf::{self, SgfGraph};
use zforce_core::{PatternDigraph, Sign, SignedDigraph};

use crate::CliError;

/// Read and parse a graph file, optionally symmetrizing its edges.
pub fn load_graph(path: &Path, undirected: bool) -> Result<SgfGraph, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::usage(format!("cannot read {}: {e}", path.display())))?;
    let graph = sgf::parse(&text)
        .map_err(|e| CliError::usage(format!("{}: {e}", path.display())))?;
    if undirected {
        symmetrize(graph)
    } else {
        Ok(graph)
    }
}

/// Add the reverse of every directed edge, keeping loops as declared.
fn symmetrize(graph: SgfGraph) -> Result<SgfGraph, CliError> {
    match graph {
        SgfGraph::Signed(g) => {
            let mut edges: BTreeMap<(usize, usize), Sign> = BTreeMap::new();
            for (i, j, s) in g.edges() {
                for key in [(i, j), (j, i)] {
                    if let Some(prev) = edges.insert(key, s) {
                        if prev != s {
                            return Err(CliError::usage(format!(
                                "cannot symmetrize: edges {i}->{j} and {j}->{i} carry \
                                 conflicting signs"
                            )));
                        }
                    }
                }
            }
            let mut out = SignedDigraph::new(g.node_count()).expect("source graph is nonempty");
            for ((i, j), s) in edges {
                out.add_edge(i, j, s).expect("edges are deduplicated");
            }
            for (v, l) in g.loops() {
                out.add_loop(v, l).expect("loops copied from a valid graph");
            }
            Ok(SgfGraph::Signed(out))
        }
        SgfGraph::Pattern(g) => {
            let mut edges: BTreeSet<(usize, usize)> = BTreeSet::new();
            for (i, j) in g.edges() {
                edges.insert((i, j));
                edges.insert((j, i));
            }
            let mut out = PatternDigraph::new(g.node_count()).expect("source graph is nonempty");
            for (i, j) in edges {
                out.add_edge(i, j).expect("edges are deduplicated");
            }
            for (v, l) in g.loops() {
                out.add_loop(v, l).expect("loops copied from a valid graph");
            }
            Ok(SgfGraph::Pattern(out))
        }
    }
}

/// Parse a strict comma-separated list of 1-indexed nodes. `-` (or an empty
/// string) denotes the empty set; duplicates are rejected.
pub fn parse_node_set(text: &str) -> Result<BTreeSet<usize>, CliError> {
    let trimmed = text.trim();
    if trimmed.is_empty() || trimmed == "-" {
        return Ok(BTreeSet::new());
    }
    let mut set = BTreeSet::new();
    for item in trimmed.split(',') {
        let item = item.trim();
        let v: usize = item
            .parse()
            .map_err(|_| CliError::usage(format!("invalid node `{item}` in set `{text}`")))?;
        if v == 0 {
            return Err(CliError::usage("nodes are 1-indexed; 0 is not a node"));
        }
        if !set.insert(v) {
            return Err(CliError::usage(format!("node {v} listed twice in `{text}`")));
        }
    }
    Ok(set)
}

/// Parse a comma-separated list of eigenvalue class names, preserving order
/// and rejecting duplicates.
pub fn parse_classes(text: &str) -> Result<Vec<EigenClass>, CliError> {
    let mut out = Vec::new();
    for item in text.split(',') {
        let class = match item.trim() {
            "zero" => EigenClass::Zero,
            "positive" => EigenClass::Positive,
            "negative" => EigenClass::Negative,
            "complex" => EigenClass::Complex,
            other => {
                return Err(CliError::usage(format!(
                    "unknown eigenvalue class `{other}` \
                     (expected zero, positive, negative or complex)"
                )))
            }
        };
        if out.contains(&class) {
            return Err(CliError::usage(format!(
                "class `{}` listed twice",
                class.name()
            )));
        }
        out.push(class);
    }
    Ok(out)
}

/// Thread count to use: the `--jobs` flag wins, then the `ZFORCE_JOBS`
/// variable, then `None` for the library default (all cores).
pub fn resolve_jobs(flag: Option<usize>) -> Result<Option<usize>, CliError> {
    let jobs = match flag {
        Some(j) => Some(j),
        None => match std::env::var("ZFORCE_JOBS") {
            Ok(text) => Some(text.parse().map_err(|_| {
                CliError::usage(format!("ZFORCE_JOBS must be a thread count, got `{text}`"))
            })?),
            Err(std::env::VarError::NotPresent) => None,
            Err(e) => return Err(CliError::usage(format!("ZFORCE_JOBS: {e}"))),
        },
    };
    if jobs == Some(0) {
        return Err(CliError::usage("the thread count must be at least 1"));
    }
    Ok(jobs)
}
