//! CLI acceptance: every subcommand, run twice with identical flags and
//! seeds, must produce byte-identical output (criterion 9), plus exit-code
//! contract checks and golden files for the fixed-format outputs.
//!
//! Set MORPHIND_BLESS=1 to regenerate the golden files.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_morphind"))
}

fn data(file: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../data")
        .join(file)
        .to_string_lossy()
        .into_owned()
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn run_ok(args: &[&str]) -> String {
    let out = run(args);
    assert!(
        out.status.success(),
        "command {args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).expect("utf-8 output")
}

/// A deterministic corpus in a temp dir, shared by the tests below.
fn fixture_corpus(dir: &Path) -> String {
    let path = dir.join("fixture.corpus").to_string_lossy().into_owned();
    run_ok(&["gen", "--n", "400", "--seed", "3", "--out", &path]);
    path
}

#[test]
fn criterion_09_every_subcommand_is_byte_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = fixture_corpus(dir.path());
    let s6 = data("rules_paper_s6.rules");
    let trommelen = data("baseline_trommelen.rules");

    let invocations: Vec<Vec<&str>> = vec![
        vec!["gen", "--n", "120", "--seed", "9"],
        vec!["gen", "--n", "60", "--seed", "9", "--noise", "0.1", "--mono", "0.3"],
        vec!["train", "--in", &corpus],
        vec!["train", "--in", &corpus, "--prune", "--criterion", "gain", "--categories"],
        vec!["classify", "--train", &corpus, "--in", &corpus, "--format", "csv"],
        vec!["classify", "--rules", &s6, "--in", &corpus],
        vec!["rules", "derive", "--in", &corpus],
        vec!["rules", "parse", "--rules", &s6],
        vec!["rules", "apply", "--rules", &s6, "--in", &corpus, "--report"],
        vec!["rules", "apply", "--rules", &trommelen, "--in", &corpus, "--seed", "5"],
        vec!["crossval", "--in", &corpus, "--k", "5", "--seed", "7", "--baselines"],
        vec!["crossval", "--in", &corpus, "--k", "5", "--seed", "7", "--format", "csv"],
        vec!["crossval", "--in", &corpus, "--k", "5", "--seed", "7", "--no-stratified"],
        vec!["project", "--keep", "n3,c3", "--in", &corpus],
        vec!["cluster", "--in", &corpus, "--feature", "c3", "--cut", "2"],
        vec!["cluster", "--in", &corpus, "--feature", "c3", "--format", "csv"],
        vec![
            "compare", "--in", &corpus, "--rules-a", &trommelen, "--rules-b", &s6,
            "--seed", "11", "--label-a", "handcrafted", "--label-b", "induced",
        ],
    ];

    for args in &invocations {
        let first = run(args);
        let second = run(args);
        assert!(first.status.success(), "{args:?}: {}", String::from_utf8_lossy(&first.stderr));
        assert_eq!(first.stdout, second.stdout, "stdout differs for {args:?}");
        assert_eq!(first.stderr, second.stderr, "stderr differs for {args:?}");
        assert!(!first.stdout.is_empty(), "no output for {args:?}");
    }
    println!(
        "criterion 9: PASS — {} invocations byte-identical across repeated runs",
        invocations.len()
    );
}

#[test]
fn output_files_match_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = fixture_corpus(dir.path());
    let out_path = dir.path().join("tree.txt");
    let stdout = run_ok(&["train", "--in", &corpus]);
    run_ok(&["train", "--in", &corpus, "--out", &out_path.to_string_lossy()]);
    assert_eq!(stdout, std::fs::read_to_string(&out_path).unwrap());
}

#[test]
fn exit_codes_follow_the_contract() {
    // usage errors: 1
    let out = run(&[]);
    assert_eq!(out.status.code(), Some(1), "no subcommand");
    let out = run(&["train", "--bogus-flag"]);
    assert_eq!(out.status.code(), Some(1), "unknown flag");

    // data errors: 2
    let out = run(&["train", "--in", "/nonexistent/path.corpus"]);
    assert_eq!(out.status.code(), Some(2), "missing file");

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.corpus");
    std::fs::write(&bad, "too few tokens\n").unwrap();
    let out = run(&["train", "--in", &bad.to_string_lossy()]);
    assert_eq!(out.status.code(), Some(2), "malformed corpus");
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("line 1"), "parse error names the line: {stderr}");

    // help: 0
    let out = run(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
}

// ---------------------------------------------------------------------------
// golden files
// ---------------------------------------------------------------------------

fn golden_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

fn check_golden(name: &str, actual: &str) {
    let path = golden_dir().join(name);
    if std::env::var("MORPHIND_BLESS").is_ok() {
        std::fs::create_dir_all(golden_dir()).unwrap();
        std::fs::write(&path, actual).unwrap();
        return;
    }
    let expected = std::fs::read_to_string(&path)
        .unwrap_or_else(|_| panic!("missing golden file {name}; run with MORPHIND_BLESS=1"));
    assert_eq!(actual, expected, "golden mismatch for {name}");
}

#[test]
fn golden_help_texts() {
    check_golden("help_main.txt", &run_ok(&["--help"]));
    for sub in ["train", "classify", "crossval", "project", "cluster", "compare", "gen"] {
        check_golden(&format!("help_{sub}.txt"), &run_ok(&[sub, "--help"]));
    }
    check_golden("help_rules.txt", &run_ok(&["rules", "--help"]));
    for sub in ["derive", "parse", "apply"] {
        check_golden(&format!("help_rules_{sub}.txt"), &run_ok(&["rules", sub, "--help"]));
    }
}

#[test]
fn golden_subcommand_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = dir.path().join("g.corpus").to_string_lossy().into_owned();
    let gen_out = run_ok(&["gen", "--n", "150", "--seed", "5", "--out", &corpus]);
    assert!(gen_out.is_empty());
    check_golden("gen_n150_seed5.corpus", &std::fs::read_to_string(&corpus).unwrap());

    let s6 = data("rules_paper_s6.rules");
    let trommelen = data("baseline_trommelen.rules");
    check_golden("train.txt", &run_ok(&["train", "--in", &corpus, "--prune"]));
    check_golden("rules_derive.txt", &run_ok(&["rules", "derive", "--in", &corpus]));
    check_golden("rules_parse_s6.txt", &run_ok(&["rules", "parse", "--rules", &s6]));
    check_golden(
        "crossval_csv.txt",
        &run_ok(&["crossval", "--in", &corpus, "--k", "4", "--seed", "2", "--format", "csv"]),
    );
    check_golden(
        "crossval_text.txt",
        &run_ok(&["crossval", "--in", &corpus, "--k", "4", "--seed", "2", "--baselines"]),
    );
    check_golden(
        "cluster.txt",
        &run_ok(&["cluster", "--in", &corpus, "--feature", "c3", "--cut", "2"]),
    );
    check_golden(
        "compare.txt",
        &run_ok(&[
            "compare", "--in", &corpus, "--rules-a", &trommelen, "--rules-b", &s6,
            "--label-a", "handcrafted", "--label-b", "induced",
        ]),
    );
    check_golden("project_nc.txt", &run_ok(&["project", "--keep", "n3,c3", "--in", &corpus]));
    check_golden(
        "apply_report.txt",
        &run_ok(&["rules", "apply", "--rules", &s6, "--in", &corpus, "--report"]),
    );
}
