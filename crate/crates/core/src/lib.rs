//! Zero forcing games and strong structural controllability certificates for
//! signed directed networks.
//!
//! The crate decides combinatorial controllability certificates for networks
//! given only by a sign pattern (or a zero-nonzero pattern), using the zero
//! forcing game family: the classical coloring rule on patterns and the
//! four-clause signing-and-coloring rule on signed graphs. Every certificate
//! can be cross-checked numerically by sampling concrete matrices from the
//! pattern's qualitative class and running eigenvector/PBH rank tests.
//!
//! Module map:
//! * [`sign`] — the closed algebra of pattern symbols `{0, x, +, -, ?}`.
//! * [`graph`] — signed and zero-nonzero digraphs and the looped closures.
//! * [`sgf`] — the line-oriented on-disk graph format.
//! * [`forcing`] — the coloring games, derived sets and forcing predicates.
//! * [`search`] — exact minimum forcing sets and a greedy upper bound.
//! * [`certify`] — controllability certificates built from the predicates.
//! * [`gen`] — seeded random graph generators for testing and validation.
//! * [`oracle`] — matrix sampling, spectra, PBH tests, empirical validation.

pub mod certify;
pub mod forcing;
pub mod gen;
pub mod graph;
pub mod oracle;
pub mod search;
pub mod sgf;
pub mod sign;

pub use certify::{
    Certificate, ClassVerdict, MultiplicityBound, OverallVerdict, PatternVerdict, SpectralClass,
};
pub use forcing::{DerivedSets, GameLimits, GameMode, ZfsCheck};
pub use graph::{GraphView, PatternDigraph, SignedDigraph};
pub use search::{ForcingKind, SearchResult};
pub use sign::{EntryLabel, Sign};
