//! End-to-end tests of the `zforce` binary: the exit-status contract, the
//! report formats and the reproducibility guarantees.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use zforce_core::sgf::{self, SgfGraph};

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
}

fn run(args: &[&str]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_zforce"));
    // Keep the suite independent of the ambient environment.
    cmd.env_remove("ZFORCE_JOBS");
    cmd.args(args).output().expect("the binary runs")
}

fn run_with_env(args: &[&str], key: &str, value: &str) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_zforce"));
    cmd.env_remove("ZFORCE_JOBS");
    cmd.env(key, value);
    cmd.args(args).output().expect("the binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("stdout is utf-8")
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("stderr is utf-8")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn graph_arg(name: &str) -> String {
    fixture(name).display().to_string()
}

// ---------------------------------------------------------------------------
// check
// ---------------------------------------------------------------------------

#[test]
fn check_reports_a_passing_signed_forcing_set() {
    let g = graph_arg("star5.sgf");
    let out = run(&["check", "--graph", &g, "--set", "4,5", "--kind", "signed"]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("verdict: true"), "{text}");
    assert!(text.contains("colored: 1,2,3,4,5 (5 of 5)"), "{text}");
}

#[test]
fn check_reports_a_stalled_single_control() {
    let g = graph_arg("chain4.sgf");
    let out = run(&["check", "--graph", &g, "--set", "3", "--kind", "signed"]);
    assert_eq!(code(&out), 1);
    let text = stdout(&out);
    assert!(text.contains("verdict: false"), "{text}");
    assert!(text.contains("colored: 3 (1 of 4)"), "{text}");
    // The stall leaves consistent marks on the three white nodes.
    assert!(text.contains("marks: 1:+,2:-,4:+"), "{text}");
}

#[test]
fn check_accepts_the_full_node_set_for_the_positive_kind() {
    let g = graph_arg("chain4.sgf");
    let out = run(&[
        "check", "--graph", &g, "--set", "1,2,3,4", "--kind", "positive",
    ]);
    assert_eq!(code(&out), 0);
}

#[test]
fn check_trace_names_the_clauses() {
    let g = graph_arg("chain4.sgf");
    let out = run(&[
        "check", "--graph", &g, "--set", "3", "--kind", "signed", "--trace",
    ]);
    let text = stdout(&out);
    assert!(text.contains("clause 4: marks 1 +"), "{text}");
    assert!(text.contains("clause 3: pivot 3 marks 4 +"), "{text}");
}

#[test]
fn check_kv_output_is_line_oriented() {
    let g = graph_arg("star5.sgf");
    let out = run(&[
        "check", "--graph", &g, "--set", "4,5", "--kind", "signed", "--format", "kv",
    ]);
    let text = stdout(&out);
    assert!(text.contains("verdict=true\n"), "{text}");
    assert!(text.contains("exhaustive=true\n"), "{text}");
    assert!(text.contains("colored=1,2,3,4,5\n"), "{text}");
}

#[test]
fn check_decides_the_classical_strong_gap() {
    let g = graph_arg("gap5.sgf");
    let classical = run(&["check", "--graph", &g, "--set", "4,5", "--kind", "classical"]);
    assert_eq!(code(&classical), 0, "{}", stdout(&classical));
    let strong = run(&["check", "--graph", &g, "--set", "4,5", "--kind", "strong"]);
    assert_eq!(code(&strong), 1, "{}", stdout(&strong));
}

#[test]
fn check_accepts_the_empty_set() {
    let g = graph_arg("chain4.sgf");
    let out = run(&["check", "--graph", &g, "--set", "-", "--kind", "signed"]);
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).contains("set: -"), "{}", stdout(&out));
}

#[test]
fn signed_kinds_reject_pattern_graphs() {
    let g = graph_arg("pattern3.sgf");
    let out = run(&["check", "--graph", &g, "--set", "1", "--kind", "signed"]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("signed graph"), "{}", stderr(&out));
}

// ---------------------------------------------------------------------------
// usage errors
// ---------------------------------------------------------------------------

#[test]
fn usage_errors_exit_two() {
    let g = graph_arg("star5.sgf");
    let unknown_flag = run(&["check", "--graph", &g, "--set", "1", "--kind", "signed", "--bogus"]);
    assert_eq!(code(&unknown_flag), 2);

    let missing_file = run(&["check", "--graph", "no-such-file.sgf", "--set", "1", "--kind", "signed"]);
    assert_eq!(code(&missing_file), 2);

    let bad_node = run(&["check", "--graph", &g, "--set", "1,x", "--kind", "signed"]);
    assert_eq!(code(&bad_node), 2);

    let zero_node = run(&["check", "--graph", &g, "--set", "0", "--kind", "signed"]);
    assert_eq!(code(&zero_node), 2);

    let duplicate = run(&["check", "--graph", &g, "--set", "1,1", "--kind", "signed"]);
    assert_eq!(code(&duplicate), 2);

    let csv_elsewhere = run(&[
        "check", "--graph", &g, "--set", "1", "--kind", "signed", "--format", "csv",
    ]);
    assert_eq!(code(&csv_elsewhere), 2);
    assert!(
        stderr(&csv_elsewhere).contains("only available for verify"),
        "{}",
        stderr(&csv_elsewhere)
    );
}

#[test]
fn help_and_version_exit_zero() {
    let help = run(&["--help"]);
    assert_eq!(code(&help), 0);
    assert!(stdout(&help).contains("Exit status"), "{}", stdout(&help));
    let version = run(&["--version"]);
    assert_eq!(code(&version), 0);
}

// ---------------------------------------------------------------------------
// closure
// ---------------------------------------------------------------------------

#[test]
fn closure_emits_the_positive_looped_graph() {
    let g = graph_arg("chain4.sgf");
    let out = run(&["closure", "--graph", &g, "--which", "plus"]);
    assert_eq!(code(&out), 0);
    assert_eq!(
        stdout(&out),
        "nodes 4\nedge 2 1 -\nedge 3 2 +\nedge 3 4 +\n\
         loop 1 ?\nloop 2 ?\nloop 3 +\nloop 4 +\n"
    );
}

#[test]
fn closure_emits_the_negative_looped_graph() {
    let g = graph_arg("chain4.sgf");
    let out = run(&["closure", "--graph", &g, "--which", "minus"]);
    assert_eq!(code(&out), 0);
    assert_eq!(
        stdout(&out),
        "nodes 4\nedge 2 1 -\nedge 3 2 +\nedge 3 4 +\n\
         loop 1 ?\nloop 2 -\nloop 3 ?\nloop 4 -\n"
    );
}

#[test]
fn closure_emits_the_cross_looped_pattern() {
    let g = graph_arg("pattern3.sgf");
    let out = run(&["closure", "--graph", &g, "--which", "cross"]);
    assert_eq!(code(&out), 0);
    assert_eq!(
        stdout(&out),
        "nodes 3\nedge 2 3 x\nedge 3 1 x\nloop 1 ?\nloop 2 ?\nloop 3 x\n"
    );
}

#[test]
fn closure_output_reparses_to_the_in_memory_closure() {
    let path = fixture("chain4.sgf");
    let source = match sgf::parse(&std::fs::read_to_string(&path).unwrap()).unwrap() {
        SgfGraph::Signed(g) => g,
        SgfGraph::Pattern(_) => panic!("chain4 is signed"),
    };
    let out = run(&["closure", "--graph", &path.display().to_string(), "--which", "plus"]);
    let reparsed = match sgf::parse(&stdout(&out)).unwrap() {
        SgfGraph::Signed(g) => g,
        SgfGraph::Pattern(_) => panic!("the plus closure is signed"),
    };
    assert_eq!(reparsed, source.looped_positive());
}

#[test]
fn closure_plus_and_minus_require_signs() {
    let g = graph_arg("pattern3.sgf");
    let out = run(&["closure", "--graph", &g, "--which", "plus"]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("zero-nonzero pattern"), "{}", stderr(&out));
}

#[test]
fn undirected_flag_symmetrizes_edges() {
    let g = graph_arg("chain4.sgf");
    let out = run(&["closure", "--graph", &g, "--undirected", "--which", "plus"]);
    assert_eq!(code(&out), 0);
    assert_eq!(
        stdout(&out),
        "nodes 4\nedge 1 2 -\nedge 2 1 -\nedge 2 3 +\nedge 3 2 +\n\
         edge 3 4 +\nedge 4 3 +\nloop 1 ?\nloop 2 ?\nloop 3 +\nloop 4 +\n"
    );
}

#[test]
fn undirected_flag_rejects_conflicting_signs() {
    let path = std::env::temp_dir().join(format!(
        "zforce-cli-test-conflict-{}.sgf",
        std::process::id()
    ));
    std::fs::write(&path, "nodes 2\nedge 1 2 +\nedge 2 1 -\n").unwrap();
    let out = run(&[
        "check",
        "--graph",
        &path.display().to_string(),
        "--undirected",
        "--set",
        "1",
        "--kind",
        "signed",
    ]);
    std::fs::remove_file(&path).ok();
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("conflicting signs"), "{}", stderr(&out));
}

// ---------------------------------------------------------------------------
// min
// ---------------------------------------------------------------------------

#[test]
fn min_finds_the_leaf_pair_in_the_star() {
    // Nodes 4 and 5 have no incoming edges and no loops, so every forcing
    // set contains them; the pair itself suffices.
    let g = graph_arg("star5.sgf");
    let out = run(&["min", "--graph", &g, "--kind", "signed"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("minimum size: 2"), "{text}");
    assert!(text.contains("witness: 4,5"), "{text}");
}

#[test]
fn min_respects_the_node_bound() {
    let g = graph_arg("star5.sgf");
    let out = run(&["min", "--graph", &g, "--kind", "signed", "--bound", "3"]);
    assert_eq!(code(&out), 3);
    assert!(stderr(&out).contains("limited to 3 nodes"), "{}", stderr(&out));
}

#[test]
fn min_greedy_reports_an_upper_bound() {
    let g = graph_arg("star5.sgf");
    let out = run(&["min", "--graph", &g, "--kind", "signed", "--greedy", "--format", "kv"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("exact=false"), "{text}");
    assert!(text.contains("witness="), "{text}");
}

// ---------------------------------------------------------------------------
// certify
// ---------------------------------------------------------------------------

#[test]
fn certify_grants_the_full_signed_certificate() {
    let g = graph_arg("star5.sgf");
    let out = run(&["certify", "--graph", &g, "--controls", "4,5", "--assert-real"]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
    let text = stdout(&out);
    assert!(text.contains("overall: certified-controllable"), "{text}");
}

#[test]
fn certify_is_inconclusive_without_the_realness_assertion() {
    let g = graph_arg("star5.sgf");
    let out = run(&["certify", "--graph", &g, "--controls", "4,5"]);
    assert_eq!(code(&out), 1);
    let text = stdout(&out);
    assert!(text.contains("overall: inconclusive"), "{text}");
    assert!(text.contains("realness of the spectrum not asserted"), "{text}");
}

#[test]
fn certify_reports_the_stalled_zero_class() {
    let g = graph_arg("chain4.sgf");
    let out = run(&["certify", "--graph", &g, "--controls", "3", "--assert-real"]);
    assert_eq!(code(&out), 1);
    let text = stdout(&out);
    assert!(text.contains("zero class not certified"), "{text}");
    assert!(text.contains("positive eigenvalue class: certified"), "{text}");
    assert!(text.contains("negative eigenvalue class: certified"), "{text}");
}

#[test]
fn certify_decides_the_pattern_gap() {
    let g = graph_arg("gap5.sgf");
    let pair = run(&["certify", "--graph", &g, "--controls", "4,5"]);
    assert_eq!(code(&pair), 1);
    let text = stdout(&pair);
    assert!(text.contains("classical zero forcing set: true"), "{text}");
    assert!(text.contains("strong zero forcing set: false"), "{text}");

    let triple = run(&["certify", "--graph", &g, "--controls", "2,4,5"]);
    assert_eq!(code(&triple), 0);
    assert!(
        stdout(&triple).contains("controllable for every matrix of the pattern class"),
        "{}",
        stdout(&triple)
    );
}

#[test]
fn certify_rejects_empty_controls() {
    let g = graph_arg("gap5.sgf");
    let out = run(&["certify", "--graph", &g, "--controls", "-"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn certify_rejects_assert_real_on_patterns() {
    let g = graph_arg("gap5.sgf");
    let out = run(&["certify", "--graph", &g, "--controls", "2,4,5", "--assert-real"]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("signed graphs"), "{}", stderr(&out));
}

#[test]
fn certify_trace_lists_game_moves() {
    let g = graph_arg("star5.sgf");
    let out = run(&[
        "certify", "--graph", &g, "--controls", "4,5", "--assert-real", "--trace",
    ]);
    assert!(stdout(&out).contains("clause"), "{}", stdout(&out));
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

#[test]
fn verify_passes_a_certified_control_set() {
    let g = graph_arg("star5.sgf");
    let out = run(&[
        "verify", "--graph", &g, "--controls", "4,5",
        "--samples", "40", "--seed", "1", "--format", "kv",
    ]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
    assert!(stdout(&out).contains("violations=0"), "{}", stdout(&out));
}

#[test]
fn verify_flags_an_uncontrollable_pattern() {
    // With only node 1 controlled, every sampled matrix has a left
    // eigenvector supported off node 1 (rows 2 and 3 are proportional).
    let g = graph_arg("pattern3.sgf");
    let out = run(&[
        "verify", "--graph", &g, "--controls", "1",
        "--samples", "25", "--seed", "2", "--format", "kv",
    ]);
    assert_eq!(code(&out), 1);
    assert!(
        stdout(&out).contains("zero_uncontrollable=25"),
        "{}",
        stdout(&out)
    );
}

#[test]
fn verify_csv_is_byte_identical_across_runs_and_thread_counts() {
    let g = graph_arg("star5.sgf");
    let base = [
        "verify", "--graph", &g, "--controls", "4,5",
        "--samples", "30", "--seed", "7", "--format", "csv",
    ];
    let first = run(&base);
    assert_eq!(code(&first), 0);
    let second = run(&base);
    let one_thread: Vec<&str> = base.iter().copied().chain(["--jobs", "1"]).collect();
    let two_threads: Vec<&str> = base.iter().copied().chain(["--jobs", "2"]).collect();
    let third = run(&one_thread);
    let fourth = run(&two_threads);
    assert_eq!(first.stdout, second.stdout);
    assert_eq!(first.stdout, third.stdout);
    assert_eq!(first.stdout, fourth.stdout);
    let text = stdout(&first);
    assert!(
        text.starts_with("sample,lambda_re,lambda_im,class,"),
        "{text}"
    );
}

#[test]
fn verify_respects_the_jobs_environment_variable() {
    let g = graph_arg("star5.sgf");
    let args = [
        "verify", "--graph", &g, "--controls", "4,5", "--samples", "10", "--seed", "4",
    ];
    let ok = run_with_env(&args, "ZFORCE_JOBS", "2");
    assert_eq!(code(&ok), 0, "{}", stderr(&ok));

    let bad = run_with_env(&args, "ZFORCE_JOBS", "abc");
    assert_eq!(code(&bad), 2);
    assert!(stderr(&bad).contains("ZFORCE_JOBS"), "{}", stderr(&bad));

    // An explicit flag wins over a broken variable.
    let flagged: Vec<&str> = args.iter().copied().chain(["--jobs", "1"]).collect();
    let overridden = run_with_env(&flagged, "ZFORCE_JOBS", "abc");
    assert_eq!(code(&overridden), 0, "{}", stderr(&overridden));
}

#[test]
fn verify_undirected_samples_symmetric_matrices() {
    let g = graph_arg("path3_sym.sgf");
    let out = run(&[
        "verify", "--graph", &g, "--undirected", "--controls", "1",
        "--samples", "40", "--seed", "3", "--format", "kv",
    ]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
    let text = stdout(&out);
    assert!(text.contains("violations=0"), "{text}");
    // A symmetric matrix has a real spectrum.
    assert!(text.contains("complex_eigenvalues=0"), "{text}");
}

#[test]
fn verify_writes_the_report_to_a_file() {
    let g = graph_arg("star5.sgf");
    let path = std::env::temp_dir().join(format!(
        "zforce-cli-test-report-{}.csv",
        std::process::id()
    ));
    let out = run(&[
        "verify", "--graph", &g, "--controls", "4,5",
        "--samples", "15", "--seed", "5", "--format", "csv",
        "--out", &path.display().to_string(),
    ]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("rows written"), "{}", stdout(&out));
    let written = std::fs::read_to_string(&path).unwrap();
    std::fs::remove_file(&path).ok();
    assert!(written.starts_with("sample,"), "{written}");
}

#[test]
fn verify_validates_the_class_list() {
    let g = graph_arg("star5.sgf");
    let explicit = run(&[
        "verify", "--graph", &g, "--controls", "4,5",
        "--samples", "10", "--seed", "6", "--classes", "zero,positive",
    ]);
    assert_eq!(code(&explicit), 0, "{}", stderr(&explicit));

    let duplicate = run(&[
        "verify", "--graph", &g, "--controls", "4,5", "--classes", "zero,zero",
    ]);
    assert_eq!(code(&duplicate), 2);

    let unknown = run(&[
        "verify", "--graph", &g, "--controls", "4,5", "--classes", "bogus",
    ]);
    assert_eq!(code(&unknown), 2);
}
