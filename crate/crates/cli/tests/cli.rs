//! End-to-end tests of the `modalk` binary: exit codes, report lines, and
//! the dump formats.

use std::path::Path;
use std::process::{Command, Output};

const UNSAT_EXAMPLE: &str = "<>~p1 & ([]p2 & [](~p2 | p1))";

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_modalk"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf8 stdout")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("no signal")
}

fn write(path: &Path, text: &str) {
    std::fs::write(path, text).expect("write test file");
}

#[test]
fn solve_reports_sat_with_exit_ten() {
    let out = run(&["solve", "--no-timing", "p1"]);
    assert_eq!(code(&out), 10);
    assert_eq!(
        stdout(&out),
        "file=- engine=inverse-opt verdict=SAT seqs=0 infs=0\n"
    );
}

#[test]
fn solve_reports_unsat_with_exit_twenty() {
    let out = run(&["solve", "--no-timing", "p1 & ~p1"]);
    assert_eq!(code(&out), 20);
    assert!(stdout(&out).starts_with("file=- engine=inverse-opt verdict=UNSAT"));
}

#[test]
fn every_engine_is_selectable() {
    for engine in ["inverse", "inverse-opt", "automata", "tableau", "type-elim"] {
        let out = run(&["solve", "--engine", engine, "--no-timing", UNSAT_EXAMPLE]);
        assert_eq!(code(&out), 20, "engine {engine}");
        assert!(stdout(&out).contains(&format!("engine={engine} verdict=UNSAT")));
    }
}

#[test]
fn file_prefix_reads_formula_from_disk() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g.k");
    write(&path, "p1 | ~p1\n");
    let spec = format!("file:{}", path.display());
    let out = run(&["solve", "--no-timing", &spec]);
    assert_eq!(code(&out), 10);
    assert!(stdout(&out).starts_with(&format!("file={} ", path.display())));
}

#[test]
fn timing_field_appears_unless_suppressed() {
    let timed = run(&["solve", "p1"]);
    assert!(stdout(&timed).contains(" ms="));
    let bare = run(&["solve", "--no-timing", "p1"]);
    assert!(!stdout(&bare).contains(" ms="));
}

#[test]
fn malformed_input_is_a_usage_error() {
    let out = run(&["solve", "p1 &"]);
    assert_eq!(code(&out), 1);
    assert!(!out.stderr.is_empty());
}

#[test]
fn unknown_engine_is_a_usage_error() {
    let out = run(&["solve", "--engine", "magic", "p1"]);
    assert_eq!(code(&out), 1);
}

#[test]
fn missing_file_is_a_usage_error() {
    let out = run(&["solve", "file:/no/such/file.k"]);
    assert_eq!(code(&out), 1);
}

#[test]
fn tableau_refuses_global_axioms() {
    let out = run(&["solve", "--engine", "tableau", "--axiom", "p1", "p2"]);
    assert_eq!(code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stderr).contains("does not support global axioms"));
}

#[test]
fn axiom_makes_the_difference() {
    let sat = run(&["solve", "--no-timing", "p1"]);
    assert_eq!(code(&sat), 10);
    let unsat = run(&["solve", "--axiom", "~p1", "--no-timing", "p1"]);
    assert_eq!(code(&unsat), 20);
}

#[test]
fn axiom_file_matches_inline_axiom() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("h.ax");
    write(&path, "~p1");
    let inline = run(&["solve", "--axiom", "~p1", "--no-timing", "p1"]);
    let from_file = run(&[
        "solve",
        "--axiom-file",
        path.to_str().unwrap(),
        "--no-timing",
        "p1",
    ]);
    assert_eq!(code(&inline), code(&from_file));
    assert_eq!(stdout(&inline), stdout(&from_file));
}

#[test]
fn trace_prints_the_refutation() {
    let out = run(&["solve", "--trace", "--no-timing", "p1 & ~p1"]);
    assert_eq!(code(&out), 20);
    let text = stdout(&out);
    assert!(text.contains("<- axiom("));
    assert!(text.trim_end().ends_with(": {0}"));
}

#[test]
fn model_prints_a_checkable_witness() {
    let out = run(&[
        "solve",
        "--engine",
        "tableau",
        "--model",
        "--no-timing",
        "<>p1",
    ]);
    assert_eq!(code(&out), 10);
    let text = stdout(&out);
    assert!(text.contains("model root=1"));
    assert!(text.contains("world 0: atoms={p1} succ={}"));
    assert!(text.contains("world 1: atoms={} succ={0}"));
}

#[test]
fn tiny_budget_is_inconclusive_with_meta_exit() {
    let out = run(&[
        "solve",
        "--engine",
        "inverse",
        "--budget-inf",
        "1",
        "--no-timing",
        UNSAT_EXAMPLE,
    ]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("verdict=INCONCLUSIVE"));
}

#[test]
fn xcheck_runs_four_engines_and_the_deep_equality() {
    let out = run(&["xcheck", "--deep", "--no-timing", UNSAT_EXAMPLE]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    for engine in ["inverse", "inverse-opt", "automata", "tableau"] {
        assert!(text.contains(&format!("engine={engine} verdict=UNSAT")));
    }
    assert!(text.ends_with("AGREE (4 engines, deep: 1 state-set equality)\n"));
}

#[test]
fn xcheck_without_deep_reports_engine_count_only() {
    let out = run(&["xcheck", "--no-timing", "p1 & ~p1"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).ends_with("AGREE (4 engines)\n"));
}

#[test]
fn xcheck_with_axiom_runs_three_engines() {
    let out = run(&["xcheck", "--axiom", "p1", "--no-timing", "p1"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    for engine in ["inverse", "automata", "type-elim"] {
        assert!(text.contains(&format!("engine={engine} verdict=SAT")));
    }
    assert!(text.ends_with("AGREE (3 engines)\n"));
}

#[test]
fn bench_tabulates_a_directory_in_filename_order() {
    let dir = tempfile::tempdir().unwrap();
    write(&dir.path().join("a.k"), "p1 & ~p1");
    write(&dir.path().join("b.k"), "p1");
    write(&dir.path().join("b.ax"), "~p1");
    write(&dir.path().join("c.k"), "<>p1");
    write(&dir.path().join("notes.txt"), "ignored");
    let out = run(&["bench", "--no-timing", dir.path().to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    assert_eq!(
        stdout(&out),
        "file=a.k engine=inverse-opt verdict=UNSAT seqs=3 infs=4\n\
         file=b.k engine=inverse-opt verdict=UNSAT seqs=2 infs=2\n\
         file=c.k engine=inverse-opt verdict=SAT seqs=0 infs=0\n\
         total=3 sat=1 unsat=2 error=0 inconclusive=0\n"
    );
}

#[test]
fn bench_records_errors_and_keep_going_controls_the_exit() {
    let dir = tempfile::tempdir().unwrap();
    write(&dir.path().join("bad.k"), "p1 &");
    write(&dir.path().join("good.k"), "p1");
    let strict = run(&["bench", "--no-timing", dir.path().to_str().unwrap()]);
    assert_eq!(code(&strict), 1);
    assert!(stdout(&strict).contains("file=bad.k engine=inverse-opt verdict=ERROR"));
    assert!(stdout(&strict).contains("total=2 sat=1 unsat=0 error=1 inconclusive=0"));
    let lenient = run(&[
        "bench",
        "--keep-going",
        "--no-timing",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(code(&lenient), 0);
}

#[test]
fn bench_on_an_empty_directory_prints_only_the_summary() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["bench", "--no-timing", dir.path().to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    assert_eq!(
        stdout(&out),
        "total=0 sat=0 unsat=0 error=0 inconclusive=0\n"
    );
}

#[test]
fn dump_paths_lists_id_word_kind_length_and_subformula() {
    let out = run(&["dump-paths", UNSAT_EXAMPLE]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.starts_with("0 e and 0 <>~p1 & ([]p2 & [](~p2 | p1))\n"));
    assert!(text.contains("3 e.al.dia lit 1 ~p1\n"));
}

#[test]
fn dump_paths_with_axiom_shows_both_roots() {
    let out = run(&["dump-paths", "--axiom", "p2", "p1"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("0 eG lit 0 p1\n"));
    assert!(text.contains("1 eH lit 0 p2\n"));
}

#[test]
fn dump_automaton_emits_header_states_and_buckets() {
    let out = run(&["dump-automaton", UNSAT_EXAMPLE]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.starts_with("states="));
    assert!(text.contains(" arity=1 reduced=0\n"));
    assert!(text.contains("clash="));
    assert!(text.contains("bucket 1: {"));
    let reduced = run(&["dump-automaton", "--reduced", UNSAT_EXAMPLE]);
    assert!(stdout(&reduced).contains(" reduced=1\n"));
}

#[test]
fn oversized_automaton_is_refused() {
    // seventeen diamonds push the path count past the construction bound
    let wide = (1..=17)
        .map(|i| format!("<>p{i}"))
        .collect::<Vec<_>>()
        .join(" & ");
    let out = run(&["dump-automaton", &wide]);
    assert_eq!(code(&out), 1);
    assert!(!out.stderr.is_empty());
}

#[test]
fn xcheck_degrades_when_the_automaton_is_too_large() {
    let wide = (1..=17)
        .map(|i| format!("<>p{i}"))
        .collect::<Vec<_>>()
        .join(" & ");
    let out = run(&["xcheck", "--no-timing", &wide]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(!text.contains("engine=automata"));
    assert!(text.ends_with("AGREE (3 engines)\n"));
}
