//! Golden-file tests for every subcommand. Set `UPDATE_GOLDEN=1` to rewrite the expected outputs.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn crate_dir() -> &'static Path {
    Path::new(env!("CARGO_MANIFEST_DIR"))
}

fn cotrace(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cotrace"))
        .current_dir(crate_dir())
        .args(args)
        .output()
        .expect("binary runs")
}

fn golden(name: &str, args: &[&str]) {
    let out = cotrace(args);
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    let path: PathBuf = crate_dir().join("tests/golden").join(name);
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::write(&path, &stdout).unwrap();
        return;
    }
    let expected =
        std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    assert_eq!(
        stdout,
        expected,
        "output of {args:?} differs from {}",
        path.display()
    );
}

#[test]
fn trace_single_loop() {
    golden(
        "trace_g.txt",
        &["trace", "--input", "tests/fixtures/g.json", "--cell", "R"],
    );
}

#[test]
fn trace_span_json() {
    golden(
        "trace_span.json",
        &[
            "trace",
            "--input",
            "tests/fixtures/span.json",
            "--cell",
            "L",
            "--format",
            "json",
        ],
    );
}

#[test]
fn cotrace_single_loop() {
    golden(
        "cotrace_g.txt",
        &["cotrace", "--input", "tests/fixtures/g.json", "--cell", "R"],
    );
}

#[test]
fn cotrace_span() {
    golden(
        "cotrace_span.txt",
        &[
            "cotrace",
            "--input",
            "tests/fixtures/span.json",
            "--cell",
            "L",
        ],
    );
}

#[test]
fn lift_rel() {
    golden(
        "lift_rel.json",
        &[
            "lift",
            "--input",
            "tests/fixtures/rel.json",
            "--cells",
            "F,G",
        ],
    );
}

#[test]
fn ext_span() {
    golden(
        "ext_span.json",
        &[
            "ext",
            "--input",
            "tests/fixtures/span.json",
            "--cells",
            "L,M",
        ],
    );
}

#[test]
fn enrich_hom_rel() {
    golden(
        "enrich_hom_rel.txt",
        &[
            "enrich-hom",
            "--input",
            "tests/fixtures/rel.json",
            "--cells",
            "F,F",
        ],
    );
}

#[test]
fn dims_s3() {
    golden(
        "dims_s3.txt",
        &[
            "dims",
            "--input",
            "tests/fixtures/s3.json",
            "--object",
            "S3",
        ],
    );
}

#[test]
fn dims_c3() {
    golden(
        "dims_c3.txt",
        &[
            "dims",
            "--input",
            "tests/fixtures/c3.json",
            "--object",
            "C3",
        ],
    );
}

#[test]
fn two_trace_span() {
    golden(
        "two_trace_span.json",
        &[
            "two-trace",
            "--input",
            "tests/fixtures/span.json",
            "--cell",
            "L",
            "--format",
            "json",
        ],
    );
}

#[test]
fn check_laws_on_file() {
    golden(
        "check_laws_rel.txt",
        &[
            "check-laws",
            "--input",
            "tests/fixtures/rel.json",
            "--law",
            "rel.residuation",
            "--law",
            "trace.closed_form",
        ],
    );
}

#[test]
fn corrupt_composition_exits_2() {
    let out = cotrace(&[
        "dims",
        "--input",
        "tests/fixtures/corrupt_c3.json",
        "--object",
        "C3",
    ]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("associativity fails at (1, 1, 2)"), "{err}");
}

#[test]
fn unknown_cell_exits_2() {
    let out = cotrace(&[
        "trace",
        "--input",
        "tests/fixtures/g.json",
        "--cell",
        "nope",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn malformed_pair_exits_2() {
    let out = cotrace(&["lift", "--input", "tests/fixtures/rel.json", "--cells", "F"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn tiny_budget_exits_3() {
    let out = cotrace(&[
        "check-laws",
        "--instance",
        "span",
        "--law",
        "lift.universal",
        "--budget",
        "10",
    ]);
    assert_eq!(
        out.status.code(),
        Some(3),
        "{}",
        String::from_utf8_lossy(&out.stdout)
    );
}
