//! `zforce` — zero forcing games and controllability certificates on the
//! command line.
//!
//! Every subcommand reads a graph in the line-oriented SGF format, runs one
//! stage of the pipeline (game, closure, search, certificate or numerical
//! validation) and reports through a shared exit-status contract:
//!
//! * `0` — the predicate holds / the certificate is granted / no violations,
//! * `1` — the predicate is false, the certificate is inconclusive or the
//!   validator found violations,
//! * `2` — usage or input error,
//! * `3` — a resource bound was exceeded.

mod commands;
mod input;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use zforce_core::ForcingKind;

pub const EXIT_OK: u8 = 0;
pub const EXIT_FALSE: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_BOUND: u8 = 3;

/// A user-facing failure carrying the exit status it maps to.
#[derive(Debug)]
pub struct CliError {
    pub message: String,
    pub code: u8,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        CliError {
            message: message.into(),
            code: EXIT_USAGE,
        }
    }

    pub fn bound(message: impl Into<String>) -> Self {
        CliError {
            message: message.into(),
            code: EXIT_BOUND,
        }
    }
}

impl From<zforce_core::forcing::ForcingError> for CliError {
    fn from(e: zforce_core::forcing::ForcingError) -> Self {
        use zforce_core::forcing::ForcingError;
        match e {
            ForcingError::ResourceBound { .. } => CliError::bound(e.to_string()),
            _ => CliError::usage(e.to_string()),
        }
    }
}

impl From<zforce_core::search::SearchError> for CliError {
    fn from(e: zforce_core::search::SearchError) -> Self {
        use zforce_core::search::SearchError;
        match e {
            SearchError::ResourceBound { .. } => CliError::bound(e.to_string()),
            SearchError::Forcing(f) => f.into(),
            SearchError::KindMismatch { .. } => CliError::usage(e.to_string()),
        }
    }
}

impl From<zforce_core::certify::CertifyError> for CliError {
    fn from(e: zforce_core::certify::CertifyError) -> Self {
        use zforce_core::certify::CertifyError;
        match e {
            CertifyError::EmptyControls => CliError::usage(e.to_string()),
            CertifyError::Forcing(f) => f.into(),
            CertifyError::Search(s) => s.into(),
        }
    }
}

impl From<zforce_core::oracle::OracleError> for CliError {
    fn from(e: zforce_core::oracle::OracleError) -> Self {
        use zforce_core::oracle::OracleError;
        match e {
            OracleError::BadConfig(_) | OracleError::NotSymmetric => {
                CliError::usage(e.to_string())
            }
            // The iteration budget of the eigensolver is a resource limit.
            OracleError::EigensolverFailed => CliError::bound(e.to_string()),
            OracleError::Forcing(f) => f.into(),
        }
    }
}

#[derive(Parser)]
#[command(
    name = "zforce",
    version,
    about = "Zero forcing games and controllability certificates for signed directed networks",
    after_help = "Exit status: 0 = predicate holds / certificate granted / no violations; \
                  1 = predicate false, certificate inconclusive or violations found; \
                  2 = usage or input error; 3 = resource bound exceeded."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether a node set is a zero forcing set of a given kind.
    Check(CheckArgs),
    /// Print a looped closure of the graph as SGF text.
    Closure(ClosureArgs),
    /// Find a minimum zero forcing set by exact search.
    Min(MinArgs),
    /// Derive a combinatorial controllability certificate for a control set.
    Certify(CertifyArgs),
    /// Validate a control set numerically on sampled matrices via the
    /// eigenvalue rank test.
    Verify(VerifyArgs),
}

/// Arguments shared by every subcommand that reads a graph.
#[derive(Args)]
struct GraphArgs {
    /// Path to the graph file (SGF format).
    #[arg(long, value_name = "FILE")]
    graph: PathBuf,

    /// Treat edges as undirected: add the reverse of every edge directive
    /// with the same label. Under `verify` this also restricts sampling to
    /// symmetric matrices.
    #[arg(long)]
    undirected: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    /// Human-readable report.
    Text,
    /// `key=value` lines for pipelines.
    Kv,
    /// One row per sampled eigenvalue (verify only).
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    /// Classical coloring game on the zero-nonzero pattern.
    Classical,
    /// Classical game on the cross looped pattern.
    Strong,
    /// Signing-and-coloring game on the signed graph as given.
    Signed,
    /// Signing-and-coloring game on the negative looped graph.
    Positive,
    /// Signing-and-coloring game on the positive looped graph.
    Negative,
}

impl From<KindArg> for ForcingKind {
    fn from(kind: KindArg) -> ForcingKind {
        match kind {
            KindArg::Classical => ForcingKind::Classical,
            KindArg::Strong => ForcingKind::Strong,
            KindArg::Signed => ForcingKind::Signed,
            KindArg::Positive => ForcingKind::PositiveSigned,
            KindArg::Negative => ForcingKind::NegativeSigned,
        }
    }
}

#[derive(Args)]
struct CheckArgs {
    #[command(flatten)]
    graph: GraphArgs,

    /// Comma-separated 1-indexed node set (`-` for the empty set).
    #[arg(long, value_name = "NODES")]
    set: String,

    /// Forcing-set kind to test.
    #[arg(long, value_enum)]
    kind: KindArg,

    /// Print the derivation trace move by move.
    #[arg(long)]
    trace: bool,

    /// Node-count cap for exhaustive signed-game search; larger graphs fall
    /// back to the deterministic derivation.
    #[arg(long, value_name = "N", default_value_t = 12)]
    bound: usize,

    /// Report format.
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Clone, Copy, ValueEnum)]
enum WhichClosure {
    /// Add `x` to every diagonal label of the zero-nonzero pattern.
    Cross,
    /// Add `+` to every diagonal label of the signed graph.
    Plus,
    /// Add `-` to every diagonal label of the signed graph.
    Minus,
}

#[derive(Args)]
struct ClosureArgs {
    #[command(flatten)]
    graph: GraphArgs,

    /// Which looped closure to print.
    #[arg(long, value_enum)]
    which: WhichClosure,
}

#[derive(Args)]
struct MinArgs {
    #[command(flatten)]
    graph: GraphArgs,

    /// Forcing-set kind to minimize.
    #[arg(long, value_enum)]
    kind: KindArg,

    /// Node-count cap for the exact search.
    #[arg(long, value_name = "N", default_value_t = 12)]
    bound: usize,

    /// Use the greedy heuristic instead of the exact search: an upper bound
    /// with no minimality guarantee, but no node cap either.
    #[arg(long)]
    greedy: bool,

    /// Report format.
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Worker threads (default: the ZFORCE_JOBS variable, then all cores).
    #[arg(long, value_name = "N")]
    jobs: Option<usize>,
}

#[derive(Args)]
struct CertifyArgs {
    #[command(flatten)]
    graph: GraphArgs,

    /// Comma-separated 1-indexed control nodes.
    #[arg(long, value_name = "NODES")]
    controls: String,

    /// Assert that every matrix of the qualitative class has a real
    /// spectrum; without it the signed full-network certificate stays
    /// inconclusive.
    #[arg(long)]
    assert_real: bool,

    /// Include the derivation traces in the report.
    #[arg(long)]
    trace: bool,

    /// Node-count cap for exhaustive signed-game search.
    #[arg(long, value_name = "N", default_value_t = 12)]
    bound: usize,

    /// Report format.
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    graph: GraphArgs,

    /// Comma-separated 1-indexed control nodes.
    #[arg(long, value_name = "NODES")]
    controls: String,

    /// Eigenvalue classes to check, comma-separated out of zero, positive,
    /// negative, complex (default: the three real classes for a signed
    /// graph, all four for a pattern).
    #[arg(long, value_name = "CLASSES")]
    classes: Option<String>,

    /// Matrices to sample.
    #[arg(long, value_name = "N", default_value_t = 200)]
    samples: usize,

    /// Sampler seed; identical seeds give byte-identical reports.
    #[arg(long, value_name = "SEED", default_value_t = 0)]
    seed: u64,

    /// Smallest magnitude drawn for a nonzero entry.
    #[arg(long, value_name = "X", default_value_t = 0.1)]
    mag_lo: f64,

    /// Largest magnitude drawn for a nonzero entry.
    #[arg(long, value_name = "X", default_value_t = 10.0)]
    mag_hi: f64,

    /// Probability that an unspecified diagonal entry is set to zero.
    #[arg(long, value_name = "P", default_value_t = 1.0 / 3.0)]
    zero_prob: f64,

    /// Report format.
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Write the report to this file instead of stdout.
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,

    /// Worker threads (default: the ZFORCE_JOBS variable, then all cores).
    #[arg(long, value_name = "N")]
    jobs: Option<usize>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Help and version go to stdout and are successes; everything
            // else is a usage error.
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match commands::run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
