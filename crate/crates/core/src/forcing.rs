//! The coloring games: classical rule on zero-nonzero patterns and the
//! four-clause signing-and-coloring rule on signed graphs.
//!
//! A pivot node `v` must be black, or white with a definite diagonal label
//! (anything but `?`). For the classical rule, a pivot with exactly one white
//! out-neighbor forces it black; a node with a definite loop counts among its
//! own out-neighbors, so an otherwise isolated node with an `x` loop forces
//! itself. The signed rule additionally assigns tentative signs ("marks") to
//! white nodes:
//!
//! 1. a pivot with exactly one white out-neighbor blackens it;
//! 2. a pivot all of whose white out-neighbors carry marks consistently
//!    aligned (or consistently opposed) with the connecting edge signs
//!    blackens all of them;
//! 3. a pivot with exactly one unmarked white out-neighbor `w`, the rest
//!    marked consistently, marks `w` with the product of its edge sign and
//!    the inverted alignment;
//! 4. when no white node anywhere carries a mark, an arbitrary white node is
//!    marked `+` (the global bootstrap move).
//!
//! Clauses 3 and 4 involve genuine choices, so the engine offers a
//! deterministic mode (fixed clause priority 1 > 2 > 3 > 4, lowest pivot
//! first, clause 4 picks the lowest white node) and an exhaustive mode that
//! searches all derivations and reports the largest achievable black set.
//! `?`-labeled self-loops never enter the white-out-neighbor sets: a white
//! node with a `?` loop is not an eligible pivot, and a black pivot excludes
//! itself regardless, so such loops are dropped from the adjacency.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;

use thiserror::Error;

use crate::graph::{PatternDigraph, SignedDigraph};
use crate::sign::{sign_mul, EntryLabel, Sign};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ForcingError {
    #[error("node {0} out of range 1..={1}")]
    NodeOutOfRange(usize, usize),
    #[error("pivot order must be a permutation of 1..={0}")]
    BadOrder(usize),
    #[error("exhaustive search is limited to {bound} nodes, graph has {nodes}")]
    ResourceBound { nodes: usize, bound: usize },
    #[error("trace step {index} is not applicable: {detail}")]
    InvalidTrace { index: usize, detail: String },
}

/// Resource limits for game execution.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GameLimits {
    /// Largest graph the exhaustive mode will search (hard cap 32).
    pub exhaustive_node_bound: usize,
}

impl Default for GameLimits {
    fn default() -> Self {
        GameLimits {
            exhaustive_node_bound: 12,
        }
    }
}

/// How the signed game explores clause-3/4 choices.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GameMode {
    /// Fixed clause priority and lowest-index tie-breaking; one derivation.
    Deterministic,
    /// All derivations; the result is the largest achievable black set.
    Exhaustive,
}

/// One applied game move, in replayable form. Nodes are 1-indexed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Move {
    /// Clause 1: the pivot's unique white out-neighbor turns black.
    Force { pivot: usize, node: usize },
    /// Clause 2: all of the pivot's (consistently marked) white
    /// out-neighbors turn black, listed in ascending order.
    ForceAll { pivot: usize, nodes: Vec<usize> },
    /// Clause 3: the pivot's single unmarked white out-neighbor is marked.
    Mark {
        pivot: usize,
        node: usize,
        mark: Sign,
    },
    /// Clause 4: no white node is marked anywhere; `node` is marked `+`.
    MarkFresh { node: usize },
}

impl Move {
    pub fn clause(&self) -> u8 {
        match self {
            Move::Force { .. } => 1,
            Move::ForceAll { .. } => 2,
            Move::Mark { .. } => 3,
            Move::MarkFresh { .. } => 4,
        }
    }
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Move::Force { pivot, node } => write!(f, "clause 1: pivot {pivot} forces {node}"),
            Move::ForceAll { pivot, nodes } => {
                let list: Vec<String> = nodes.iter().map(|n| n.to_string()).collect();
                write!(f, "clause 2: pivot {pivot} forces {}", list.join(","))
            }
            Move::Mark { pivot, node, mark } => {
                write!(f, "clause 3: pivot {pivot} marks {node} {mark}")
            }
            Move::MarkFresh { node } => write!(f, "clause 4: marks {node} +"),
        }
    }
}

/// Colors, marks and the move history of a finished (or replayed) game.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GameState {
    colors: Vec<bool>,
    marks: Vec<Option<Sign>>,
    trace: Vec<Move>,
}

impl GameState {
    fn new(n: usize, z: &BTreeSet<usize>) -> Self {
        let mut colors = vec![false; n];
        for &v in z {
            colors[v - 1] = true;
        }
        GameState {
            colors,
            marks: vec![None; n],
            trace: Vec::new(),
        }
    }

    pub fn is_black(&self, v: usize) -> bool {
        self.colors[v - 1]
    }

    /// The mark of node `v`; `None` means unmarked (`*`).
    pub fn mark(&self, v: usize) -> Option<Sign> {
        self.marks[v - 1]
    }

    pub fn trace(&self) -> &[Move] {
        &self.trace
    }

    pub fn derived_sets(&self) -> DerivedSets {
        DerivedSets {
            colored: self
                .colors
                .iter()
                .enumerate()
                .filter(|(_, &b)| b)
                .map(|(i, _)| i + 1)
                .collect(),
            marked: self
                .marks
                .iter()
                .enumerate()
                .filter_map(|(i, m)| m.map(|s| (i + 1, s)))
                .collect(),
            trace: self.trace.clone(),
        }
    }
}

/// Final colored and marked sets of a game run.
///
/// `marked` retains marks on nodes that later turned black; those are
/// vacuous for eigenvector-sign claims and can be listed via
/// [`DerivedSets::flagged_marks`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DerivedSets {
    pub colored: BTreeSet<usize>,
    pub marked: BTreeMap<usize, Sign>,
    pub trace: Vec<Move>,
}

impl DerivedSets {
    /// Marked nodes that ended up black; their marks carry no information.
    pub fn flagged_marks(&self) -> BTreeSet<usize> {
        self.marked
            .keys()
            .filter(|v| self.colored.contains(v))
            .copied()
            .collect()
    }
}

/// Outcome of a forcing-set predicate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZfsCheck {
    pub passes: bool,
    /// True when decided by exhaustive search. A `false` verdict with
    /// `exhaustive = false` only means the deterministic derivation stalled;
    /// some other derivation might still succeed.
    pub exhaustive: bool,
    pub derived: DerivedSets,
}

fn check_set(z: &BTreeSet<usize>, n: usize) -> Result<(), ForcingError> {
    for &v in z {
        if v == 0 || v > n {
            return Err(ForcingError::NodeOutOfRange(v, n));
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Classical rule
// ---------------------------------------------------------------------------

fn pattern_arena(g: &PatternDigraph) -> (Vec<Vec<usize>>, Vec<bool>) {
    let n = g.node_count();
    let mut out = vec![Vec::new(); n];
    for (i, j) in g.edges() {
        out[i - 1].push(j - 1);
    }
    let mut eligible = vec![false; n];
    for v in 1..=n {
        if g.loop_label(v) == EntryLabel::Cross {
            out[v - 1].push(v - 1);
        }
        eligible[v - 1] = g.loop_label(v) != EntryLabel::Unspecified;
    }
    for l in &mut out {
        l.sort_unstable();
    }
    (out, eligible)
}

fn classical_run(
    out: &[Vec<usize>],
    eligible: &[bool],
    z: &BTreeSet<usize>,
    order: &[usize],
) -> (Vec<bool>, Vec<Move>) {
    let n = out.len();
    let mut black = vec![false; n];
    for &v in z {
        black[v - 1] = true;
    }
    let mut trace = Vec::new();
    loop {
        let mut fired = false;
        for &pv in order {
            let v = pv - 1;
            if !black[v] && !eligible[v] {
                continue;
            }
            let mut whites = out[v].iter().filter(|&&u| !black[u]);
            if let (Some(&u), None) = (whites.next(), whites.next()) {
                black[u] = true;
                trace.push(Move::Force {
                    pivot: pv,
                    node: u + 1,
                });
                fired = true;
                break;
            }
        }
        if !fired {
            return (black, trace);
        }
    }
}

fn to_set(black: &[bool]) -> BTreeSet<usize> {
    black
        .iter()
        .enumerate()
        .filter(|(_, &b)| b)
        .map(|(i, _)| i + 1)
        .collect()
}

/// The final black set reached from `z` under the classical coloring rule.
/// The result is independent of application order.
pub fn classical_derived_set(
    g: &PatternDigraph,
    z: &BTreeSet<usize>,
) -> Result<BTreeSet<usize>, ForcingError> {
    let order: Vec<usize> = (1..=g.node_count()).collect();
    classical_derived_set_with_order(g, z, &order)
}

/// Like [`classical_derived_set`] but scanning pivots in the given priority
/// order (a permutation of `1..=n`). Exposed so order-independence can be
/// tested rather than assumed.
pub fn classical_derived_set_with_order(
    g: &PatternDigraph,
    z: &BTreeSet<usize>,
    order: &[usize],
) -> Result<BTreeSet<usize>, ForcingError> {
    let n = g.node_count();
    check_set(z, n)?;
    let mut seen = vec![false; n];
    for &v in order {
        if v == 0 || v > n || seen[v - 1] {
            return Err(ForcingError::BadOrder(n));
        }
        seen[v - 1] = true;
    }
    if !seen.iter().all(|&s| s) {
        return Err(ForcingError::BadOrder(n));
    }
    let (out, eligible) = pattern_arena(g);
    let (black, _) = classical_run(&out, &eligible, z, order);
    Ok(to_set(&black))
}

/// The classical derivation trace from `z` with ascending pivot priority.
pub fn classical_trace(
    g: &PatternDigraph,
    z: &BTreeSet<usize>,
) -> Result<(BTreeSet<usize>, Vec<Move>), ForcingError> {
    check_set(z, g.node_count())?;
    let (out, eligible) = pattern_arena(g);
    let order: Vec<usize> = (1..=g.node_count()).collect();
    let (black, trace) = classical_run(&out, &eligible, z, &order);
    Ok((to_set(&black), trace))
}

pub fn is_classical_zfs(g: &PatternDigraph, z: &BTreeSet<usize>) -> Result<bool, ForcingError> {
    Ok(classical_derived_set(g, z)?.len() == g.node_count())
}

/// `z` is a strong zero forcing set iff it is a classical one on the
/// cross-looped graph.
pub fn is_strong_zfs(g: &PatternDigraph, z: &BTreeSet<usize>) -> Result<bool, ForcingError> {
    is_classical_zfs(&g.looped_cross(), z)
}

// ---------------------------------------------------------------------------
// Signing-and-coloring rule
// ---------------------------------------------------------------------------

struct SignedArena {
    n: usize,
    /// Out-neighbors with edge signs, self-entry included for `+`/`-` loops.
    out: Vec<Vec<(usize, Sign)>>,
    /// True when the node may pivot while white (diagonal label is not `?`).
    eligible: Vec<bool>,
}

fn signed_arena(g: &SignedDigraph) -> SignedArena {
    let n = g.node_count();
    let mut out = vec![Vec::new(); n];
    for (i, j, s) in g.edges() {
        out[i - 1].push((j - 1, s));
    }
    let mut eligible = vec![false; n];
    for v in 1..=n {
        let label = g.loop_label(v);
        if let Some(s) = label.as_sign() {
            out[v - 1].push((v - 1, s));
        }
        eligible[v - 1] = label != EntryLabel::Unspecified;
    }
    for l in &mut out {
        l.sort_unstable_by_key(|&(u, _)| u);
    }
    SignedArena { n, out, eligible }
}

/// The white out-neighborhood of one pivot, split by mark agreement.
struct WSets {
    /// All white out-neighbors with their edge signs, ascending.
    whites: Vec<(usize, Sign)>,
    /// Count of members whose mark equals the edge sign.
    aligned: usize,
    /// Count of members whose mark is the inverse of the edge sign.
    opposed: usize,
    /// Unmarked members.
    unmarked: Vec<usize>,
}

impl SignedArena {
    fn wsets(&self, v: usize, colors: &[bool], marks: &[Option<Sign>]) -> WSets {
        let mut w = WSets {
            whites: Vec::new(),
            aligned: 0,
            opposed: 0,
            unmarked: Vec::new(),
        };
        for &(u, e) in &self.out[v] {
            if colors[u] {
                continue;
            }
            w.whites.push((u, e));
            match marks[u] {
                None => w.unmarked.push(u),
                Some(m) if m == e => w.aligned += 1,
                Some(_) => w.opposed += 1,
            }
        }
        w
    }

    /// All applicable moves in canonical order: clause-major, pivots (and
    /// clause-4 targets) ascending. The first element is the deterministic
    /// mode's next move.
    fn moves(&self, colors: &[bool], marks: &[Option<Sign>]) -> Vec<Move> {
        let mut moves = Vec::new();
        let wsets: Vec<Option<WSets>> = (0..self.n)
            .map(|v| {
                if colors[v] || self.eligible[v] {
                    Some(self.wsets(v, colors, marks))
                } else {
                    None
                }
            })
            .collect();
        for (v, w) in wsets.iter().enumerate() {
            if let Some(w) = w {
                if let [(u, _)] = w.whites[..] {
                    moves.push(Move::Force {
                        pivot: v + 1,
                        node: u + 1,
                    });
                }
            }
        }
        for (v, w) in wsets.iter().enumerate() {
            if let Some(w) = w {
                let k = w.whites.len();
                if k > 0 && (w.aligned == k || w.opposed == k) {
                    moves.push(Move::ForceAll {
                        pivot: v + 1,
                        nodes: w.whites.iter().map(|&(u, _)| u + 1).collect(),
                    });
                }
            }
        }
        for (v, w) in wsets.iter().enumerate() {
            if let Some(w) = w {
                if let [only] = w.unmarked[..] {
                    // Alignment index s: the common relation between marks
                    // and edge signs among the marked members. Exactly one
                    // side must be populated.
                    let s = match (w.aligned > 0, w.opposed > 0) {
                        (true, false) => Sign::Plus,
                        (false, true) => Sign::Minus,
                        _ => continue,
                    };
                    let (_, e) = w.whites.iter().find(|&&(u, _)| u == only).unwrap();
                    moves.push(Move::Mark {
                        pivot: v + 1,
                        node: only + 1,
                        mark: sign_mul(*e, s.inv()),
                    });
                }
            }
        }
        let any_white_marked = (0..self.n).any(|u| !colors[u] && marks[u].is_some());
        if !any_white_marked {
            for u in 0..self.n {
                if !colors[u] {
                    moves.push(Move::MarkFresh { node: u + 1 });
                }
            }
        }
        moves
    }

    fn apply(&self, mv: &Move, colors: &mut [bool], marks: &mut [Option<Sign>]) {
        match mv {
            Move::Force { node, .. } => colors[node - 1] = true,
            Move::ForceAll { nodes, .. } => {
                for &u in nodes {
                    colors[u - 1] = true;
                }
            }
            Move::Mark { node, mark, .. } => marks[node - 1] = Some(*mark),
            Move::MarkFresh { node } => marks[node - 1] = Some(Sign::Plus),
        }
    }

    fn undo(&self, mv: &Move, colors: &mut [bool], marks: &mut [Option<Sign>]) {
        match mv {
            Move::Force { node, .. } => colors[node - 1] = false,
            Move::ForceAll { nodes, .. } => {
                for &u in nodes {
                    colors[u - 1] = false;
                }
            }
            Move::Mark { node, .. } | Move::MarkFresh { node } => marks[node - 1] = None,
        }
    }
}

fn state_key(colors: &[bool], marks: &[Option<Sign>]) -> u128 {
    let mut key: u128 = 0;
    for (i, &b) in colors.iter().enumerate() {
        if b {
            key |= 1 << i;
        }
    }
    for (i, m) in marks.iter().enumerate() {
        let bits: u128 = match m {
            None => 0,
            Some(Sign::Plus) => 1,
            Some(Sign::Minus) => 2,
        };
        key |= bits << (32 + 2 * i);
    }
    key
}

struct Best {
    count: usize,
    colors: Vec<bool>,
    marks: Vec<Option<Sign>>,
    trace: Vec<Move>,
}

fn dfs(
    arena: &SignedArena,
    colors: &mut Vec<bool>,
    marks: &mut Vec<Option<Sign>>,
    path: &mut Vec<Move>,
    seen: &mut HashSet<u128>,
    best: &mut Option<Best>,
) {
    if let Some(b) = best {
        if b.count == arena.n {
            return;
        }
    }
    if !seen.insert(state_key(colors, marks)) {
        return;
    }
    let moves = arena.moves(colors, marks);
    if moves.is_empty() {
        let count = colors.iter().filter(|&&b| b).count();
        if best.as_ref().map_or(true, |b| count > b.count) {
            *best = Some(Best {
                count,
                colors: colors.clone(),
                marks: marks.clone(),
                trace: path.clone(),
            });
        }
        return;
    }
    for mv in moves {
        arena.apply(&mv, colors, marks);
        path.push(mv);
        dfs(arena, colors, marks, path, seen, best);
        let mv = path.pop().unwrap();
        arena.undo(&mv, colors, marks);
    }
}

/// Run the signing-and-coloring game from `z` on `g` to termination.
///
/// Deterministic mode follows the fixed clause priority and returns that
/// single derivation. Exhaustive mode searches every derivation (all
/// clause-application orders and clause-4 choices) and returns one whose
/// final black set has maximum cardinality; since some derivation realizes
/// it, the result is sound, and the deterministic derivation is always among
/// those explored.
pub fn signed_derived_sets(
    g: &SignedDigraph,
    z: &BTreeSet<usize>,
    mode: GameMode,
    limits: &GameLimits,
) -> Result<DerivedSets, ForcingError> {
    let n = g.node_count();
    check_set(z, n)?;
    let arena = signed_arena(g);
    let mut state = GameState::new(n, z);
    match mode {
        GameMode::Deterministic => {
            loop {
                let moves = arena.moves(&state.colors, &state.marks);
                match moves.into_iter().next() {
                    Some(mv) => {
                        arena.apply(&mv, &mut state.colors, &mut state.marks);
                        state.trace.push(mv);
                    }
                    None => break,
                }
            }
            Ok(state.derived_sets())
        }
        GameMode::Exhaustive => {
            let bound = limits.exhaustive_node_bound.min(32);
            if n > bound {
                return Err(ForcingError::ResourceBound { nodes: n, bound });
            }
            let mut best = None;
            let mut path = Vec::new();
            let mut seen = HashSet::new();
            dfs(
                &arena,
                &mut state.colors,
                &mut state.marks,
                &mut path,
                &mut seen,
                &mut best,
            );
            let b = best.expect("every game has at least one terminal state");
            let terminal = GameState {
                colors: b.colors,
                marks: b.marks,
                trace: b.trace,
            };
            Ok(terminal.derived_sets())
        }
    }
}

fn zfs_check(
    g: &SignedDigraph,
    z: &BTreeSet<usize>,
    limits: &GameLimits,
) -> Result<ZfsCheck, ForcingError> {
    let n = g.node_count();
    let exhaustive = n <= limits.exhaustive_node_bound.min(32);
    let mode = if exhaustive {
        GameMode::Exhaustive
    } else {
        GameMode::Deterministic
    };
    let derived = signed_derived_sets(g, z, mode, limits)?;
    Ok(ZfsCheck {
        passes: derived.colored.len() == n,
        exhaustive,
        derived,
    })
}

/// Does the signed game from `z` blacken all of `g`?
///
/// Uses exhaustive mode up to the node bound; above it, falls back to the
/// deterministic derivation (sound when it passes, inconclusive when not —
/// see [`ZfsCheck::exhaustive`]).
pub fn is_signed_zfs(
    g: &SignedDigraph,
    z: &BTreeSet<usize>,
    limits: &GameLimits,
) -> Result<ZfsCheck, ForcingError> {
    zfs_check(g, z, limits)
}

/// `z` certifies positive eigenvalues when it forces the negative looped
/// graph (a positive eigenvalue shifts every diagonal entry downward).
pub fn is_positive_signed_zfs(
    g: &SignedDigraph,
    z: &BTreeSet<usize>,
    limits: &GameLimits,
) -> Result<ZfsCheck, ForcingError> {
    zfs_check(&g.looped_negative(), z, limits)
}

/// `z` certifies negative eigenvalues when it forces the positive looped
/// graph.
pub fn is_negative_signed_zfs(
    g: &SignedDigraph,
    z: &BTreeSet<usize>,
    limits: &GameLimits,
) -> Result<ZfsCheck, ForcingError> {
    zfs_check(&g.looped_positive(), z, limits)
}

/// Re-execute a trace from the initial state, checking each move's clause
/// condition before applying it. Returns the final state, which must match
/// the original run's.
pub fn replay(
    g: &SignedDigraph,
    z: &BTreeSet<usize>,
    trace: &[Move],
) -> Result<GameState, ForcingError> {
    let n = g.node_count();
    check_set(z, n)?;
    let arena = signed_arena(g);
    let mut state = GameState::new(n, z);
    for (index, mv) in trace.iter().enumerate() {
        let legal = arena.moves(&state.colors, &state.marks);
        if !legal.contains(mv) {
            return Err(ForcingError::InvalidTrace {
                index,
                detail: format!("{mv} (legal here: {} moves)", legal.len()),
            });
        }
        arena.apply(mv, &mut state.colors, &mut state.marks);
        state.trace.push(mv.clone());
    }
    Ok(state)
}
