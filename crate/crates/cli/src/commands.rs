//! The five subcommands, each returning an exit status per the shared
//! contract.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;

use zforce_core::certify::{certify_pattern, certify_signed};
use zforce_core::forcing::{
    classical_trace, is_negative_signed_zfs, is_positive_signed_zfs, is_signed_zfs, GameLimits,
    Move,
};
use zforce_core::oracle::{monte_carlo_verify, EigenClass, SamplerConfig, Tolerances};
use zforce_core::search::{greedy_forcing_set, min_forcing_set, SearchLimits};
use zforce_core::sgf::{self, SgfGraph};
use zforce_core::{ForcingKind, GraphView, OverallVerdict, PatternDigraph, Sign, SignedDigraph};

use crate::input;
use crate::{
    CertifyArgs, CheckArgs, CliError, ClosureArgs, Command, Format, MinArgs, VerifyArgs,
    WhichClosure, EXIT_FALSE, EXIT_OK,
};

pub fn run(command: Command) -> Result<u8, CliError> {
    match command {
        Command::Check(args) => check(args),
        Command::Closure(args) => closure(args),
        Command::Min(args) => min(args),
        Command::Certify(args) => certify(args),
        Command::Verify(args) => verify(args),
    }
}

fn view_of(graph: &SgfGraph) -> GraphView<'_> {
    match graph {
        SgfGraph::Signed(g) => GraphView::Signed(g),
        SgfGraph::Pattern(p) => GraphView::Pattern(p),
    }
}

fn fmt_set(s: &BTreeSet<usize>) -> String {
    let items: Vec<String> = s.iter().map(|v| v.to_string()).collect();
    if items.is_empty() {
        "-".to_string()
    } else {
        items.join(",")
    }
}

fn fmt_marks(marks: &BTreeMap<usize, Sign>) -> String {
    let items: Vec<String> = marks.iter().map(|(v, s)| format!("{v}:{s}")).collect();
    if items.is_empty() {
        "-".to_string()
    } else {
        items.join(",")
    }
}

fn reject_csv(format: Format) -> Result<(), CliError> {
    if format == Format::Csv {
        return Err(CliError::usage("csv output is only available for verify"));
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// check
// ---------------------------------------------------------------------------

struct CheckOutcome {
    passes: bool,
    exhaustive: bool,
    decision: &'static str,
    colored: BTreeSet<usize>,
    marked: BTreeMap<usize, Sign>,
    trace: Vec<Move>,
}

fn classical_outcome(p: &PatternDigraph, z: &BTreeSet<usize>) -> Result<CheckOutcome, CliError> {
    let (colored, trace) = classical_trace(p, z)?;
    Ok(CheckOutcome {
        passes: colored.len() == p.node_count(),
        exhaustive: true,
        decision: "unique derived set",
        colored,
        marked: BTreeMap::new(),
        trace,
    })
}

fn signed_outcome(
    g: &SignedDigraph,
    z: &BTreeSet<usize>,
    kind: ForcingKind,
    bound: usize,
) -> Result<CheckOutcome, CliError> {
    let limits = GameLimits {
        exhaustive_node_bound: bound,
    };
    let check = match kind {
        ForcingKind::Signed => is_signed_zfs(g, z, &limits)?,
        ForcingKind::PositiveSigned => is_positive_signed_zfs(g, z, &limits)?,
        ForcingKind::NegativeSigned => is_negative_signed_zfs(g, z, &limits)?,
        _ => unreachable!("classical kinds are handled by the caller"),
    };
    Ok(CheckOutcome {
        passes: check.passes,
        exhaustive: check.exhaustive,
        decision: if check.exhaustive {
            "exhaustive game search"
        } else {
            "deterministic derivation (a stall is not conclusive)"
        },
        colored: check.derived.colored,
        marked: check.derived.marked,
        trace: check.derived.trace,
    })
}

fn check(args: CheckArgs) -> Result<u8, CliError> {
    reject_csv(args.format)?;
    let graph = input::load_graph(&args.graph.graph, args.graph.undirected)?;
    let set = input::parse_node_set(&args.set)?;
    let kind = ForcingKind::from(args.kind);
    let n = graph.node_count();

    let outcome = match (&graph, kind) {
        (SgfGraph::Pattern(p), ForcingKind::Classical) => classical_outcome(p, &set)?,
        (SgfGraph::Pattern(p), ForcingKind::Strong) => classical_outcome(&p.looped_cross(), &set)?,
        (SgfGraph::Signed(g), ForcingKind::Classical) => {
            classical_outcome(&g.underlying_pattern(), &set)?
        }
        (SgfGraph::Signed(g), ForcingKind::Strong) => {
            classical_outcome(&g.underlying_pattern().looped_cross(), &set)?
        }
        (SgfGraph::Pattern(_), k) => {
            return Err(CliError::usage(format!(
                "kind {k} requires a signed graph, but {} is a zero-nonzero pattern",
                args.graph.graph.display()
            )))
        }
        (SgfGraph::Signed(g), k) => signed_outcome(g, &set, k, args.bound)?,
    };

    // Marks on nodes that ended up black are superseded by the coloring;
    // only the marks still on white nodes say anything.
    let white_marks: BTreeMap<usize, Sign> = outcome
        .marked
        .iter()
        .filter(|(v, _)| !outcome.colored.contains(v))
        .map(|(&v, &s)| (v, s))
        .collect();

    match args.format {
        Format::Text => {
            println!("verdict: {}", outcome.passes);
            println!("kind: {kind}");
            println!("set: {}", fmt_set(&set));
            println!("decision: {}", outcome.decision);
            println!(
                "colored: {} ({} of {})",
                fmt_set(&outcome.colored),
                outcome.colored.len(),
                n
            );
            println!("marks: {}", fmt_marks(&white_marks));
            if args.trace {
                println!("trace:");
                for mv in &outcome.trace {
                    println!("  {mv}");
                }
            }
        }
        Format::Kv => {
            println!("verdict={}", outcome.passes);
            println!("kind={kind}");
            println!("set={}", fmt_set(&set));
            println!("exhaustive={}", outcome.exhaustive);
            println!("colored={}", fmt_set(&outcome.colored));
            println!("marks={}", fmt_marks(&white_marks));
        }
        Format::Csv => unreachable!("rejected above"),
    }
    Ok(if outcome.passes { EXIT_OK } else { EXIT_FALSE })
}

// ---------------------------------------------------------------------------
// closure
// ---------------------------------------------------------------------------

fn closure(args: ClosureArgs) -> Result<u8, CliError> {
    let graph = input::load_graph(&args.graph.graph, args.graph.undirected)?;
    let text = match (&graph, args.which) {
        (SgfGraph::Pattern(p), WhichClosure::Cross) => sgf::serialize_pattern(&p.looped_cross()),
        (SgfGraph::Signed(g), WhichClosure::Cross) => {
            sgf::serialize_pattern(&g.underlying_pattern().looped_cross())
        }
        (SgfGraph::Signed(g), WhichClosure::Plus) => sgf::serialize_signed(&g.looped_positive()),
        (SgfGraph::Signed(g), WhichClosure::Minus) => sgf::serialize_signed(&g.looped_negative()),
        (SgfGraph::Pattern(_), _) => {
            return Err(CliError::usage(format!(
                "the plus and minus closures need edge signs, but {} is a zero-nonzero pattern",
                args.graph.graph.display()
            )))
        }
    };
    print!("{text}");
    Ok(EXIT_OK)
}

// ---------------------------------------------------------------------------
// min
// ---------------------------------------------------------------------------

fn min(args: MinArgs) -> Result<u8, CliError> {
    reject_csv(args.format)?;
    configure_jobs(args.jobs)?;
    let graph = input::load_graph(&args.graph.graph, args.graph.undirected)?;
    let kind = ForcingKind::from(args.kind);
    let limits = SearchLimits {
        exact_node_bound: args.bound,
    };
    let result = if args.greedy {
        greedy_forcing_set(view_of(&graph), kind, &limits)?
    } else {
        min_forcing_set(view_of(&graph), kind, &limits)?
    };

    match args.format {
        Format::Text => {
            println!("kind: {kind}");
            if result.exact {
                println!("minimum size: {}", result.minimum_size);
            } else {
                println!("witness size: {} (greedy upper bound)", result.minimum_size);
            }
            println!("witness: {}", fmt_set(&result.witness));
            println!("sets examined: {}", result.nodes_explored);
        }
        Format::Kv => {
            println!("kind={kind}");
            println!("minimum_size={}", result.minimum_size);
            println!("witness={}", fmt_set(&result.witness));
            println!("exact={}", result.exact);
            println!("explored={}", result.nodes_explored);
        }
        Format::Csv => unreachable!("rejected above"),
    }
    Ok(EXIT_OK)
}

// ---------------------------------------------------------------------------
// certify
// ---------------------------------------------------------------------------

fn certify(args: CertifyArgs) -> Result<u8, CliError> {
    reject_csv(args.format)?;
    let graph = input::load_graph(&args.graph.graph, args.graph.undirected)?;
    let controls = input::parse_node_set(&args.controls)?;
    match &graph {
        SgfGraph::Pattern(p) => {
            if args.assert_real {
                return Err(CliError::usage(
                    "--assert-real only applies to signed graphs; the pattern certificate \
                     covers the whole class unconditionally",
                ));
            }
            let verdict = certify_pattern(p, &controls)?;
            match args.format {
                Format::Text => {
                    print!("{}", verdict.to_text());
                    if args.trace {
                        let (_, classical) = classical_trace(p, &controls)?;
                        println!("classical trace:");
                        for mv in &classical {
                            println!("  {mv}");
                        }
                        let looped = p.looped_cross();
                        let (_, strong) = classical_trace(&looped, &controls)?;
                        println!("strong trace (on the cross looped pattern):");
                        for mv in &strong {
                            println!("  {mv}");
                        }
                    }
                }
                Format::Kv => print!("{}", verdict.to_kv()),
                Format::Csv => unreachable!("rejected above"),
            }
            Ok(if verdict.controllable {
                EXIT_OK
            } else {
                EXIT_FALSE
            })
        }
        SgfGraph::Signed(g) => {
            let limits = GameLimits {
                exhaustive_node_bound: args.bound,
            };
            let cert = certify_signed(g, &controls, args.assert_real, &limits)?;
            match args.format {
                Format::Text => print!("{}", cert.to_text(args.trace)),
                Format::Kv => print!("{}", cert.to_kv()),
                Format::Csv => unreachable!("rejected above"),
            }
            Ok(match cert.overall {
                OverallVerdict::CertifiedControllable => EXIT_OK,
                OverallVerdict::Inconclusive => EXIT_FALSE,
            })
        }
    }
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

fn verify(args: VerifyArgs) -> Result<u8, CliError> {
    configure_jobs(args.jobs)?;
    let graph = input::load_graph(&args.graph.graph, args.graph.undirected)?;
    let controls = input::parse_node_set(&args.controls)?;
    let classes = match &args.classes {
        Some(text) => input::parse_classes(text)?,
        None => match &graph {
            SgfGraph::Signed(_) => EigenClass::REAL.to_vec(),
            SgfGraph::Pattern(_) => EigenClass::ALL.to_vec(),
        },
    };
    let config = SamplerConfig {
        magnitude_range: (args.mag_lo, args.mag_hi),
        zero_prob: args.zero_prob,
        samples: args.samples,
        seed: args.seed,
        symmetric: args.graph.undirected,
    };
    let tol = Tolerances::default();
    let report = monte_carlo_verify(view_of(&graph), &controls, &classes, &config, &tol)?;

    let rendered = match args.format {
        Format::Text => report.to_text(),
        Format::Kv => report.to_kv(),
        Format::Csv => report.to_csv(),
    };
    match &args.out {
        Some(path) => {
            fs::write(path, &rendered)
                .map_err(|e| CliError::usage(format!("cannot write {}: {e}", path.display())))?;
            println!(
                "{} eigenvalue rows written to {}",
                report.records.len(),
                path.display()
            );
        }
        None => print!("{rendered}"),
    }
    Ok(if report.violations() == 0 {
        EXIT_OK
    } else {
        EXIT_FALSE
    })
}

fn configure_jobs(flag: Option<usize>) -> Result<(), CliError> {
    if let Some(jobs) = input::resolve_jobs(flag)? {
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
            .map_err(|e| CliError::usage(format!("cannot configure {jobs} worker threads: {e}")))?;
    }
    Ok(())
}
