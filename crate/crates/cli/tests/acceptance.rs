//! Acceptance suite. Run with `cargo test -p cotrace-cli --test acceptance -- --nocapture`
//! to see one PASS/FAIL line per criterion.

use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use cotrace_core::bicat::{self, Concrete, Instance};
use cotrace_core::laws::{self, LawReport, Status, SuiteConfig};
use cotrace_core::{FinCat, Prof};

const RESIDUATION_LIMIT: Duration = Duration::from_secs(1);
const LIFT_LIMIT: Duration = Duration::from_secs(60);
const CLOSED_FORM_LIMIT: Duration = Duration::from_secs(120);
const ADJUNCTION_LIMIT: Duration = Duration::from_secs(60);
const SUITE_LIMIT: Duration = Duration::from_secs(300);
/// Fewest cases a sampled instance must run for one law.
const MIN_SAMPLED_CASES: usize = 200;

/// Laws that make up the theorem suite.
const THEOREMS: &[&str] = &[
    "scalar.fixed_point",
    "trace.cyclicity",
    "cotrace.cyclicity",
    "cotrace.conjugation",
    "trace.dual_invariance",
    "cotrace.dual_invariance",
    "trace.tensor",
    "cotrace.tensor_cell",
    "linearity.copower",
    "linearity.power",
    "pairing.linear_functor",
    "adjoint_relation",
    "frobenius_form",
    "enrichment.agreement",
    "enrichment.composition",
    "two_trace.bijection",
    "codim.monoid",
    "dim.module",
    "codim.three_monoids",
    "scalar.symmetry",
];

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn suite(laws: &[&str], instances: &[Instance], max_size: usize) -> (Vec<LawReport>, Duration) {
    let cfg = SuiteConfig {
        max_size,
        instances: instances.to_vec(),
        laws: Some(laws.iter().map(|s| s.to_string()).collect()),
        ..SuiteConfig::default()
    };
    let t0 = Instant::now();
    let reports = laws::run_law_suite(&cfg).expect("config is valid");
    (reports, t0.elapsed())
}

fn all_pass(reports: &[LawReport]) -> Result<(), String> {
    match reports.iter().find(|r| r.status != Status::Pass) {
        None => Ok(()),
        Some(r) => Err(format!(
            "{} on {} is {}: {}",
            r.law,
            r.instance.as_str(),
            r.status.as_str(),
            r.witness.as_ref().map_or("", |w| w.detail.as_str())
        )),
    }
}

fn within(elapsed: Duration, limit: Duration) -> Result<(), String> {
    if elapsed < limit {
        Ok(())
    } else {
        Err(format!("took {elapsed:.2?}, limit {limit:?}"))
    }
}

fn cases(reports: &[LawReport], law: &str, instance: Instance) -> usize {
    reports
        .iter()
        .find(|r| r.law == law && r.instance == instance)
        .map_or(0, |r| r.cases as usize)
}

fn residuation() -> Outcome {
    let (reports, t) = suite(&["rel.residuation"], &[Instance::Rel], 2);
    all_pass(&reports)?;
    // Every triple over sets of size at most 2: sizes (a, b, c) give 2^(ab + bc + ca) triples.
    let expected: usize = (0..3usize)
        .flat_map(|a| {
            (0..3usize)
                .flat_map(move |b| (0..3usize).map(move |c| 1usize << (a * b + b * c + c * a)))
        })
        .sum();
    let got = cases(&reports, "rel.residuation", Instance::Rel);
    if got != expected {
        return Err(format!("{got} cases, expected all {expected}"));
    }
    within(t, RESIDUATION_LIMIT)?;
    Ok(format!("{got} triples in {t:.2?}"))
}

fn lift_universal() -> Outcome {
    let (reports, t) = suite(&["lift.universal"], &[Instance::Span, Instance::Prof], 3);
    all_pass(&reports)?;
    for i in [Instance::Span, Instance::Prof] {
        let n = cases(&reports, "lift.universal", i);
        if n < MIN_SAMPLED_CASES {
            return Err(format!("{} ran {n} cases", i.as_str()));
        }
    }
    within(t, LIFT_LIMIT)?;
    Ok(format!(
        "span {} / prof {} cases in {t:.2?}",
        cases(&reports, "lift.universal", Instance::Span),
        cases(&reports, "lift.universal", Instance::Prof)
    ))
}

fn closed_forms() -> Outcome {
    let laws = ["trace.closed_form", "cotrace.closed_form"];
    let (reports, t) = suite(&laws, &[Instance::Rel, Instance::Span, Instance::Prof], 3);
    all_pass(&reports)?;
    // Endo-relations on sets of size 0..=3.
    let rel_all: usize = (0..4usize).map(|a| 1usize << (a * a)).sum();
    for law in laws {
        if cases(&reports, law, Instance::Rel) != rel_all {
            return Err(format!("{law} on rel is not exhaustive"));
        }
        for i in [Instance::Span, Instance::Prof] {
            let n = cases(&reports, law, i);
            if n < MIN_SAMPLED_CASES {
                return Err(format!("{law} on {} ran {n} cases", i.as_str()));
            }
        }
    }
    within(t, CLOSED_FORM_LIMIT)?;
    Ok(format!("{} reports in {t:.2?}", reports.len()))
}

fn adjunctions() -> Outcome {
    let laws = ["adjunction.spread_cotrace", "adjunction.trace_cospread"];
    let t0 = Instant::now();
    let (rel, _) = suite(&laws, &[Instance::Rel], 2);
    let (rest, _) = suite(&laws, &[Instance::Span, Instance::Prof], 3);
    let t = t0.elapsed();
    all_pass(&rel)?;
    all_pass(&rest)?;
    // Two scalars and two endo-relations on one set of size 0..=2.
    let rel_all: usize = (0..3usize).map(|a| 4usize << (2 * a * a)).sum();
    for law in laws {
        if cases(&rel, law, Instance::Rel) != rel_all {
            return Err(format!("{law} on rel is not exhaustive"));
        }
    }
    within(t, ADJUNCTION_LIMIT)?;
    Ok(format!("{} reports in {t:.2?}", rel.len() + rest.len()))
}

fn theorem_suite() -> Outcome {
    let ids = laws::law_ids();
    if let Some(missing) = THEOREMS.iter().find(|t| !ids.contains(t)) {
        return Err(format!("no law id {missing}"));
    }
    let t0 = Instant::now();
    let reports = laws::run_law_suite(&SuiteConfig::default()).expect("default config is valid");
    let t = t0.elapsed();
    all_pass(&reports)?;
    for i in [Instance::Rel, Instance::Span, Instance::Prof] {
        for law in THEOREMS {
            if !reports.iter().any(|r| r.law == *law && r.instance == i) {
                return Err(format!("{law} did not run on {}", i.as_str()));
            }
        }
    }
    within(t, SUITE_LIMIT)?;
    Ok(format!("{} reports in {t:.2?}", reports.len()))
}

/// Group elements as permutations of 0..3, composed pointwise.
fn s3_elements() -> Vec<[usize; 3]> {
    let mut out = Vec::new();
    for a in 0..3 {
        for b in 0..3 {
            for c in 0..3 {
                if a != b && b != c && a != c {
                    out.push([a, b, c]);
                }
            }
        }
    }
    out
}

fn perm_mul(g: &[usize; 3], f: &[usize; 3]) -> [usize; 3] {
    [g[f[0]], g[f[1]], g[f[2]]]
}

/// Center size and class count by brute force.
fn center_and_classes<T: Clone + PartialEq>(
    elems: &[T],
    mul: impl Fn(&T, &T) -> T,
) -> (usize, usize) {
    let center = elems
        .iter()
        .filter(|z| elems.iter().all(|g| mul(z, g) == mul(g, z)))
        .count();
    let inverse = |g: &T| {
        elems
            .iter()
            .find(|h| elems.iter().all(|x| mul(&mul(g, h), x) == *x))
            .unwrap()
            .clone()
    };
    let mut seen: Vec<T> = Vec::new();
    let mut classes = 0;
    for x in elems {
        if seen.contains(x) {
            continue;
        }
        classes += 1;
        for g in elems {
            let y = mul(&mul(g, x), &inverse(g));
            if !seen.contains(&y) {
                seen.push(y);
            }
        }
    }
    (center, classes)
}

fn named_values() -> Outcome {
    let s3 = center_and_classes(&s3_elements(), perm_mul);
    let c3 = center_and_classes(&[0usize, 1, 2], |g, f| (g + f) % 3);
    if s3 != (1, 3) || c3 != (3, 3) {
        return Err(format!(
            "oracles disagree with frozen values: S3 {s3:?}, C3 {c3:?}"
        ));
    }
    let b = Prof::default();
    let mut got = Vec::new();
    for (name, cat, (center, classes)) in [
        ("S3", FinCat::symmetric_group_3(), s3),
        ("C3", FinCat::cyclic_group(3), c3),
    ] {
        let (dim, codim) = bicat::dims(&b, &cat).map_err(|e| e.to_string())?;
        let pair = (b.scalar_size(&dim), b.scalar_size(&codim));
        // Dim counts conjugacy classes, coDim counts central elements.
        if pair != (classes, center) {
            return Err(format!(
                "{name}: (Dim, coDim) = {pair:?}, expected {:?}",
                (classes, center)
            ));
        }
        got.push(format!("{name} {pair:?}"));
    }
    let fixtures = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures");
    for (file, object, expected) in [
        ("s3.json", "S3", "Dim=3, coDim=1"),
        ("c3.json", "C3", "Dim=3, coDim=3"),
    ] {
        let out = cli(&[
            "dims",
            "--input",
            fixtures.join(file).to_str().unwrap(),
            "--object",
            object,
        ]);
        let text = String::from_utf8_lossy(&out.stdout);
        if !out.status.success() || text.trim() != expected {
            return Err(format!("cli dims on {file} printed {text:?}"));
        }
    }
    Ok(got.join(", "))
}

fn cli(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_cotrace"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn cli_contract() -> Outcome {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests");
    for sub in [
        "trace",
        "cotrace",
        "lift",
        "ext",
        "enrich-hom",
        "dims",
        "two-trace",
        "check-laws",
    ] {
        let stem = sub.replace('-', "_");
        let found = std::fs::read_dir(dir.join("golden"))
            .map_err(|e| e.to_string())?
            .filter_map(|e| e.ok())
            .any(|e| {
                e.file_name()
                    .to_string_lossy()
                    .starts_with(&format!("{stem}_"))
            });
        if !found {
            return Err(format!("no golden file for {sub}"));
        }
    }
    let corrupt = cli(&[
        "dims",
        "--input",
        dir.join("fixtures/corrupt_c3.json").to_str().unwrap(),
        "--object",
        "C3",
    ]);
    if corrupt.status.code() != Some(2) {
        return Err(format!(
            "corrupted composition exited {:?}",
            corrupt.status.code()
        ));
    }
    let work = Path::new(env!("CARGO_TARGET_TMPDIR")).join("acceptance");
    std::fs::create_dir_all(&work).map_err(|e| e.to_string())?;
    let report = work.join("mutation.json");
    let mutated = cli(&[
        "check-laws",
        "--instance",
        "rel",
        "--law",
        "lift.universal",
        "--mutate",
        "drop-lift-element",
        "--report",
        report.to_str().unwrap(),
    ]);
    if mutated.status.code() != Some(1) {
        return Err(format!("mutation exited {:?}", mutated.status.code()));
    }
    let stdout = String::from_utf8_lossy(&mutated.stdout);
    let replay = stdout
        .lines()
        .find_map(|l| l.trim().strip_prefix("replay: cotrace "))
        .ok_or("no replay line")?;
    let args: Vec<&str> = replay.split_whitespace().collect();
    let again = cli(&args);
    if again.status.code() != Some(1) {
        return Err(format!("replay exited {:?}", again.status.code()));
    }
    Ok("goldens present, exit 2 on corrupt input, exit 1 on mutation and on replay".into())
}

#[test]
fn acceptance() {
    let criteria: [Criterion; 7] = [
        ("1 rel residuation, exhaustive", residuation),
        ("2 lift universal property", lift_universal),
        ("3 closed-form agreement", closed_forms),
        ("4 adjunction bijections", adjunctions),
        ("5 theorem suite", theorem_suite),
        ("6 named computed values", named_values),
        ("7 cli contract", cli_contract),
    ];
    let mut failed = Vec::new();
    for (name, run) in criteria {
        match run() {
            Ok(detail) => println!("PASS criterion {name}: {detail}"),
            Err(detail) => {
                println!("FAIL criterion {name}: {detail}");
                failed.push(name);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
