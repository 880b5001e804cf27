//! The line-oriented on-disk graph format.
//!
//! ```text
//! # comment
//! nodes 4
//! edge 2 1 -
//! edge 3 2 +
//! loop 1 ?
//! ```
//!
//! `nodes N` must come first. `edge I J S` declares a directed edge `I -> J`
//! whose label `S` is `+` or `-` for signed graphs, or `x` for zero-nonzero
//! patterns. `loop V L` declares a self-loop with `L` in `{+,-,?}` (signed)
//! or `{x,?}` (pattern). A file may not mix the two alphabets; a file using
//! neither (no edges, loops all `?`) parses as a signed graph.

use std::fmt::Write as _;

use thiserror::Error;

use crate::graph::{GraphError, PatternDigraph, SignedDigraph};
use crate::sign::EntryLabel;

/// A parsed graph of either flavor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SgfGraph {
    Signed(SignedDigraph),
    Pattern(PatternDigraph),
}

impl SgfGraph {
    pub fn node_count(&self) -> usize {
        match self {
            SgfGraph::Signed(g) => g.node_count(),
            SgfGraph::Pattern(g) => g.node_count(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {col}: {kind}")]
pub struct SgfError {
    pub line: usize,
    pub col: usize,
    pub kind: SgfErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SgfErrorKind {
    #[error("unknown directive `{0}`")]
    UnknownDirective(String),
    #[error("`nodes` must be the first directive")]
    NodesNotFirst,
    #[error("duplicate `nodes` directive")]
    DuplicateNodes,
    #[error("missing `nodes` directive")]
    MissingNodes,
    #[error("expected {expected} arguments, found {found}")]
    ArgCount { expected: usize, found: usize },
    #[error("invalid node count `{0}`")]
    BadCount(String),
    #[error("invalid node index `{0}`")]
    BadNode(String),
    #[error("invalid label `{0}` (expected one of {1})")]
    BadLabel(String, &'static str),
    #[error("signed label `{0}` in a zero-nonzero pattern file")]
    SignInPattern(String),
    #[error("pattern label `x` in a signed graph file")]
    CrossInSigned,
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// One directive with the column of each token, for diagnostics.
struct Tokens<'a> {
    line: usize,
    items: Vec<(usize, &'a str)>,
}

impl<'a> Tokens<'a> {
    fn split(line_no: usize, text: &'a str) -> Self {
        let mut items = Vec::new();
        let mut col = 1;
        for part in text.split(|c: char| c.is_whitespace()) {
            if !part.is_empty() {
                items.push((col, part));
            }
            col += part.chars().count() + 1;
        }
        Tokens {
            line: line_no,
            items,
        }
    }

    fn err(&self, index: usize, kind: SgfErrorKind) -> SgfError {
        let col = self
            .items
            .get(index)
            .or_else(|| self.items.last())
            .map_or(1, |&(c, _)| c);
        SgfError {
            line: self.line,
            col,
            kind,
        }
    }

    fn expect_args(&self, expected: usize) -> Result<(), SgfError> {
        let found = self.items.len() - 1;
        if found != expected {
            Err(self.err(
                expected.min(found) + 1,
                SgfErrorKind::ArgCount { expected, found },
            ))
        } else {
            Ok(())
        }
    }

    fn node(&self, index: usize) -> Result<usize, SgfError> {
        let (_, tok) = self.items[index];
        match tok.parse::<usize>() {
            Ok(v) if v >= 1 => Ok(v),
            _ => Err(self.err(index, SgfErrorKind::BadNode(tok.to_string()))),
        }
    }
}

enum Directive {
    Edge {
        from: usize,
        to: usize,
        label: EntryLabel,
    },
    Loop {
        node: usize,
        label: EntryLabel,
    },
}

/// Parse SGF text, detecting whether it is a signed graph or a zero-nonzero
/// pattern from the labels used.
pub fn parse(text: &str) -> Result<SgfGraph, SgfError> {
    let mut n: Option<usize> = None;
    let mut directives: Vec<(Tokens, Directive)> = Vec::new();
    let mut saw_sign = false;
    let mut saw_cross = false;

    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let content = raw.split('#').next().unwrap_or("");
        let toks = Tokens::split(line_no, content);
        let Some(&(_, head)) = toks.items.first() else {
            continue;
        };
        match head {
            "nodes" => {
                if n.is_some() {
                    return Err(toks.err(0, SgfErrorKind::DuplicateNodes));
                }
                if !directives.is_empty() {
                    return Err(toks.err(0, SgfErrorKind::NodesNotFirst));
                }
                toks.expect_args(1)?;
                let (_, tok) = toks.items[1];
                match tok.parse::<usize>() {
                    Ok(v) if v >= 1 => n = Some(v),
                    _ => return Err(toks.err(1, SgfErrorKind::BadCount(tok.to_string()))),
                }
            }
            "edge" => {
                if n.is_none() {
                    return Err(toks.err(0, SgfErrorKind::NodesNotFirst));
                }
                toks.expect_args(3)?;
                let from = toks.node(1)?;
                let to = toks.node(2)?;
                let (_, tok) = toks.items[3];
                let label = match tok {
                    "+" => EntryLabel::Plus,
                    "-" => EntryLabel::Minus,
                    "x" => EntryLabel::Cross,
                    other => {
                        return Err(
                            toks.err(3, SgfErrorKind::BadLabel(other.to_string(), "+ - x"))
                        )
                    }
                };
                match label {
                    EntryLabel::Cross => saw_cross = true,
                    _ => saw_sign = true,
                }
                directives.push((toks, Directive::Edge { from, to, label }));
            }
            "loop" => {
                if n.is_none() {
                    return Err(toks.err(0, SgfErrorKind::NodesNotFirst));
                }
                toks.expect_args(2)?;
                let node = toks.node(1)?;
                let (_, tok) = toks.items[2];
                let label = match tok {
                    "+" => EntryLabel::Plus,
                    "-" => EntryLabel::Minus,
                    "x" => EntryLabel::Cross,
                    "?" => EntryLabel::Unspecified,
                    other => {
                        return Err(
                            toks.err(2, SgfErrorKind::BadLabel(other.to_string(), "+ - x ?"))
                        )
                    }
                };
                match label {
                    EntryLabel::Cross => saw_cross = true,
                    EntryLabel::Plus | EntryLabel::Minus => saw_sign = true,
                    _ => {}
                }
                directives.push((toks, Directive::Loop { node, label }));
            }
            other => {
                return Err(toks.err(0, SgfErrorKind::UnknownDirective(other.to_string())));
            }
        }
    }

    let Some(n) = n else {
        return Err(SgfError {
            line: text.lines().count().max(1),
            col: 1,
            kind: SgfErrorKind::MissingNodes,
        });
    };

    if saw_cross && saw_sign {
        // Report at the first directive whose label clashes with the rest.
        for (toks, d) in &directives {
            let label = match d {
                Directive::Edge { label, .. } | Directive::Loop { label, .. } => *label,
            };
            if label == EntryLabel::Cross {
                return Err(toks.err(0, SgfErrorKind::CrossInSigned));
            }
        }
    }

    if saw_cross {
        let mut g = PatternDigraph::new(n).map_err(|e| SgfError {
            line: 1,
            col: 1,
            kind: e.into(),
        })?;
        for (toks, d) in directives {
            match d {
                Directive::Edge { from, to, label } => {
                    debug_assert_eq!(label, EntryLabel::Cross);
                    g.add_edge(from, to).map_err(|e| toks.err(1, e.into()))?;
                }
                Directive::Loop { node, label } => {
                    g.add_loop(node, label).map_err(|e| toks.err(1, e.into()))?;
                }
            }
        }
        Ok(SgfGraph::Pattern(g))
    } else {
        let mut g = SignedDigraph::new(n).map_err(|e| SgfError {
            line: 1,
            col: 1,
            kind: e.into(),
        })?;
        for (toks, d) in directives {
            match d {
                Directive::Edge { from, to, label } => {
                    let sign = label.as_sign().expect("sign alphabet enforced above");
                    g.add_edge(from, to, sign).map_err(|e| toks.err(1, e.into()))?;
                }
                Directive::Loop { node, label } => {
                    g.add_loop(node, label).map_err(|e| toks.err(1, e.into()))?;
                }
            }
        }
        Ok(SgfGraph::Signed(g))
    }
}

pub fn serialize_signed(g: &SignedDigraph) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "nodes {}", g.node_count());
    for (i, j, s) in g.edges() {
        let _ = writeln!(out, "edge {i} {j} {s}");
    }
    for (v, l) in g.loops() {
        let _ = writeln!(out, "loop {v} {l}");
    }
    out
}

pub fn serialize_pattern(g: &PatternDigraph) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "nodes {}", g.node_count());
    for (i, j) in g.edges() {
        let _ = writeln!(out, "edge {i} {j} x");
    }
    for (v, l) in g.loops() {
        let _ = writeln!(out, "loop {v} {l}");
    }
    out
}

pub fn serialize(g: &SgfGraph) -> String {
    match g {
        SgfGraph::Signed(g) => serialize_signed(g),
        SgfGraph::Pattern(g) => serialize_pattern(g),
    }
}
