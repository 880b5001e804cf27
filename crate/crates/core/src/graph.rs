//! Signed and zero-nonzero digraph representations and the looped closures.
//!
//! Nodes are 1-indexed throughout the public API, matching the convention of
//! the on-disk format and all reports. An edge `i -> j` corresponds to a
//! nonzero pattern entry in row `j`, column `i`, so the entries of a column
//! of the pattern enumerate the out-neighbors of that column's node.
//!
//! Self-loops are kept separate from off-diagonal edges: an absent diagonal
//! entry means label `0` (no loop), while a `?` loop is stored explicitly
//! because it stands for a loop that may or may not be present.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::sign::{label_add, EntryLabel, Sign};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("node {0} out of range 1..={1}")]
    NodeOutOfRange(usize, usize),
    #[error("self-loop {0}->{0} must be declared as a loop, not an edge")]
    SelfLoopAsEdge(usize),
    #[error("duplicate edge {0}->{1}")]
    DuplicateEdge(usize, usize),
    #[error("conflicting signs for edge {0}->{1}")]
    ConflictingEdge(usize, usize),
    #[error("duplicate loop on node {0}")]
    DuplicateLoop(usize),
    #[error("invalid loop label {1} on node {0}")]
    InvalidLoopLabel(usize, EntryLabel),
    #[error("invalid entry label {2} at row {0}, column {1}")]
    InvalidEntry(usize, usize, EntryLabel),
    #[error("pattern grid is not square: row {0} has {1} entries, expected {2}")]
    NonSquareGrid(usize, usize, usize),
    #[error("graph must have at least one node")]
    Empty,
}

/// A directed graph with `+`/`-` labeled edges and `+`/`-`/`?` labeled
/// self-loops; the in-memory form of a sign pattern.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignedDigraph {
    n: usize,
    edges: BTreeMap<(usize, usize), Sign>,
    loops: BTreeMap<usize, EntryLabel>,
}

/// A directed graph where off-diagonal edges only record presence and
/// self-loops carry `x` or `?`; the in-memory form of a zero-nonzero pattern.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PatternDigraph {
    n: usize,
    edges: BTreeSet<(usize, usize)>,
    loops: BTreeMap<usize, EntryLabel>,
}

fn check_node(v: usize, n: usize) -> Result<(), GraphError> {
    if v == 0 || v > n {
        Err(GraphError::NodeOutOfRange(v, n))
    } else {
        Ok(())
    }
}

impl SignedDigraph {
    pub fn new(n: usize) -> Result<Self, GraphError> {
        if n == 0 {
            return Err(GraphError::Empty);
        }
        Ok(SignedDigraph {
            n,
            edges: BTreeMap::new(),
            loops: BTreeMap::new(),
        })
    }

    /// Add the edge `from -> to` with the given sign.
    pub fn add_edge(&mut self, from: usize, to: usize, sign: Sign) -> Result<(), GraphError> {
        check_node(from, self.n)?;
        check_node(to, self.n)?;
        if from == to {
            return Err(GraphError::SelfLoopAsEdge(from));
        }
        match self.edges.get(&(from, to)) {
            Some(&s) if s != sign => Err(GraphError::ConflictingEdge(from, to)),
            Some(_) => Err(GraphError::DuplicateEdge(from, to)),
            None => {
                self.edges.insert((from, to), sign);
                Ok(())
            }
        }
    }

    /// Add a self-loop on `v` labeled `+`, `-` or `?`.
    pub fn add_loop(&mut self, v: usize, label: EntryLabel) -> Result<(), GraphError> {
        check_node(v, self.n)?;
        if !matches!(
            label,
            EntryLabel::Plus | EntryLabel::Minus | EntryLabel::Unspecified
        ) {
            return Err(GraphError::InvalidLoopLabel(v, label));
        }
        if self.loops.contains_key(&v) {
            return Err(GraphError::DuplicateLoop(v));
        }
        self.loops.insert(v, label);
        Ok(())
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    /// All nodes, `1..=n`.
    pub fn nodes(&self) -> impl Iterator<Item = usize> + '_ {
        1..=self.n
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, Sign)> + '_ {
        self.edges.iter().map(|(&(i, j), &s)| (i, j, s))
    }

    pub fn edge_sign(&self, from: usize, to: usize) -> Option<Sign> {
        self.edges.get(&(from, to)).copied()
    }

    /// Loop label of `v`; `0` when no loop is declared.
    pub fn loop_label(&self, v: usize) -> EntryLabel {
        self.loops.get(&v).copied().unwrap_or(EntryLabel::Zero)
    }

    /// Declared loops only (label `+`, `-` or `?`).
    pub fn loops(&self) -> impl Iterator<Item = (usize, EntryLabel)> + '_ {
        self.loops.iter().map(|(&v, &l)| (v, l))
    }

    /// Build the graph from an `n x n` sign pattern grid. Off-diagonal
    /// entries must lie in `{0, +, -}` and diagonal entries in `{0, +, -, ?}`;
    /// a nonzero entry in row `j`, column `i` yields the edge `i -> j`.
    pub fn from_sign_pattern(grid: &[Vec<EntryLabel>]) -> Result<Self, GraphError> {
        let n = grid.len();
        let mut g = SignedDigraph::new(n)?;
        for (r, row) in grid.iter().enumerate() {
            if row.len() != n {
                return Err(GraphError::NonSquareGrid(r + 1, row.len(), n));
            }
            for (c, &label) in row.iter().enumerate() {
                if r == c {
                    match label {
                        EntryLabel::Zero => {}
                        EntryLabel::Plus | EntryLabel::Minus | EntryLabel::Unspecified => {
                            g.add_loop(r + 1, label)?;
                        }
                        EntryLabel::Cross => {
                            return Err(GraphError::InvalidEntry(r + 1, c + 1, label))
                        }
                    }
                } else {
                    match label {
                        EntryLabel::Zero => {}
                        EntryLabel::Plus | EntryLabel::Minus => {
                            g.add_edge(c + 1, r + 1, label.as_sign().unwrap())?;
                        }
                        _ => return Err(GraphError::InvalidEntry(r + 1, c + 1, label)),
                    }
                }
            }
        }
        Ok(g)
    }

    /// The sign pattern grid this graph represents; inverse of
    /// [`SignedDigraph::from_sign_pattern`].
    pub fn to_sign_pattern(&self) -> Vec<Vec<EntryLabel>> {
        let mut grid = vec![vec![EntryLabel::Zero; self.n]; self.n];
        for (&(i, j), &s) in &self.edges {
            grid[j - 1][i - 1] = s.as_label();
        }
        for (&v, &l) in &self.loops {
            grid[v - 1][v - 1] = l;
        }
        grid
    }

    fn with_diagonal_shift(&self, shift: EntryLabel) -> SignedDigraph {
        let mut loops = BTreeMap::new();
        for v in 1..=self.n {
            // label_add never fails here: both operands are sign-alphabet.
            let l = label_add(self.loop_label(v), shift).unwrap();
            if l != EntryLabel::Zero {
                loops.insert(v, l);
            }
        }
        SignedDigraph {
            n: self.n,
            edges: self.edges.clone(),
            loops,
        }
    }

    /// The positive looped graph: every diagonal label has `+` added to it.
    pub fn looped_positive(&self) -> SignedDigraph {
        self.with_diagonal_shift(EntryLabel::Plus)
    }

    /// The negative looped graph: every diagonal label has `-` added to it.
    pub fn looped_negative(&self) -> SignedDigraph {
        self.with_diagonal_shift(EntryLabel::Minus)
    }

    /// Erase signs: every edge keeps its place, `+`/`-` loops become `x`.
    pub fn underlying_pattern(&self) -> PatternDigraph {
        let mut loops = BTreeMap::new();
        for (&v, &l) in &self.loops {
            let erased = match l {
                EntryLabel::Plus | EntryLabel::Minus => EntryLabel::Cross,
                other => other,
            };
            loops.insert(v, erased);
        }
        PatternDigraph {
            n: self.n,
            edges: self.edges.keys().copied().collect(),
            loops,
        }
    }

    /// True when for every edge `i -> j` the reverse edge exists with the
    /// same sign and the pattern is therefore symmetric.
    pub fn is_symmetric(&self) -> bool {
        self.edges
            .iter()
            .all(|(&(i, j), &s)| self.edge_sign(j, i) == Some(s))
    }

    /// Add the reverse of every edge with the same sign, turning the graph
    /// into the digraph encoding of an undirected signed graph. Fails when a
    /// reverse edge already exists with the opposite sign.
    pub fn symmetrized(&self) -> Result<SignedDigraph, GraphError> {
        let mut g = self.clone();
        for (i, j, s) in self.edges() {
            match g.edge_sign(j, i) {
                None => g.add_edge(j, i, s)?,
                Some(r) if r != s => return Err(GraphError::ConflictingEdge(j, i)),
                Some(_) => {}
            }
        }
        Ok(g)
    }
}

impl PatternDigraph {
    pub fn new(n: usize) -> Result<Self, GraphError> {
        if n == 0 {
            return Err(GraphError::Empty);
        }
        Ok(PatternDigraph {
            n,
            edges: BTreeSet::new(),
            loops: BTreeMap::new(),
        })
    }

    pub fn add_edge(&mut self, from: usize, to: usize) -> Result<(), GraphError> {
        check_node(from, self.n)?;
        check_node(to, self.n)?;
        if from == to {
            return Err(GraphError::SelfLoopAsEdge(from));
        }
        if !self.edges.insert((from, to)) {
            return Err(GraphError::DuplicateEdge(from, to));
        }
        Ok(())
    }

    /// Add a self-loop on `v` labeled `x` or `?`.
    pub fn add_loop(&mut self, v: usize, label: EntryLabel) -> Result<(), GraphError> {
        check_node(v, self.n)?;
        if !matches!(label, EntryLabel::Cross | EntryLabel::Unspecified) {
            return Err(GraphError::InvalidLoopLabel(v, label));
        }
        if self.loops.contains_key(&v) {
            return Err(GraphError::DuplicateLoop(v));
        }
        self.loops.insert(v, label);
        Ok(())
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn nodes(&self) -> impl Iterator<Item = usize> + '_ {
        1..=self.n
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn has_edge(&self, from: usize, to: usize) -> bool {
        self.edges.contains(&(from, to))
    }

    pub fn loop_label(&self, v: usize) -> EntryLabel {
        self.loops.get(&v).copied().unwrap_or(EntryLabel::Zero)
    }

    pub fn loops(&self) -> impl Iterator<Item = (usize, EntryLabel)> + '_ {
        self.loops.iter().map(|(&v, &l)| (v, l))
    }

    /// Build the graph from an `n x n` zero-nonzero grid. Off-diagonal
    /// entries must lie in `{0, x}` and diagonal entries in `{0, x, ?}`.
    pub fn from_pattern(grid: &[Vec<EntryLabel>]) -> Result<Self, GraphError> {
        let n = grid.len();
        let mut g = PatternDigraph::new(n)?;
        for (r, row) in grid.iter().enumerate() {
            if row.len() != n {
                return Err(GraphError::NonSquareGrid(r + 1, row.len(), n));
            }
            for (c, &label) in row.iter().enumerate() {
                if r == c {
                    match label {
                        EntryLabel::Zero => {}
                        EntryLabel::Cross | EntryLabel::Unspecified => g.add_loop(r + 1, label)?,
                        _ => return Err(GraphError::InvalidEntry(r + 1, c + 1, label)),
                    }
                } else {
                    match label {
                        EntryLabel::Zero => {}
                        EntryLabel::Cross => g.add_edge(c + 1, r + 1)?,
                        _ => return Err(GraphError::InvalidEntry(r + 1, c + 1, label)),
                    }
                }
            }
        }
        Ok(g)
    }

    /// The zero-nonzero grid this graph represents.
    pub fn to_pattern(&self) -> Vec<Vec<EntryLabel>> {
        let mut grid = vec![vec![EntryLabel::Zero; self.n]; self.n];
        for &(i, j) in &self.edges {
            grid[j - 1][i - 1] = EntryLabel::Cross;
        }
        for (&v, &l) in &self.loops {
            grid[v - 1][v - 1] = l;
        }
        grid
    }

    /// True when every edge has its reverse and the pattern is symmetric.
    pub fn is_symmetric(&self) -> bool {
        self.edges.iter().all(|&(i, j)| self.has_edge(j, i))
    }

    /// Add the reverse of every edge; the digraph encoding of an undirected
    /// pattern graph.
    pub fn symmetrized(&self) -> PatternDigraph {
        let mut g = self.clone();
        for (i, j) in self.edges() {
            if !g.has_edge(j, i) {
                g.edges.insert((j, i));
            }
        }
        g
    }

    /// The looped graph: every diagonal label has `x` added to it
    /// (`0 -> x`, `x -> ?`, `? -> ?`).
    pub fn looped_cross(&self) -> PatternDigraph {
        let mut loops = BTreeMap::new();
        for v in 1..=self.n {
            let l = label_add(self.loop_label(v), EntryLabel::Cross).unwrap();
            if l != EntryLabel::Zero {
                loops.insert(v, l);
            }
        }
        PatternDigraph {
            n: self.n,
            edges: self.edges.clone(),
            loops,
        }
    }
}

/// A borrowed graph of either flavor, for operations that dispatch on both.
#[derive(Debug, Clone, Copy)]
pub enum GraphView<'a> {
    Pattern(&'a PatternDigraph),
    Signed(&'a SignedDigraph),
}

impl GraphView<'_> {
    pub fn node_count(&self) -> usize {
        match self {
            GraphView::Pattern(g) => g.node_count(),
            GraphView::Signed(g) => g.node_count(),
        }
    }
}
