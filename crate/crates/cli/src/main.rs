//! `cotrace`: traces, cotraces, lifts and the law suite over instance files.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use cotrace_core::bicat::{self, Concrete, Instance};
use cotrace_core::file::{InstanceFile, Named};
use cotrace_core::laws::{self, LawReport, Mutation, Status, SuiteConfig};
use cotrace_core::{Error, Limits, Prof, Rel, Span};

/// Exit code for a law counterexample.
const EXIT_COUNTEREXAMPLE: u8 = 1;
/// Exit code for unreadable or invalid input and usage errors.
const EXIT_INPUT: u8 = 2;
/// Exit code when an enumeration hit its cap before finishing.
const EXIT_BUDGET: u8 = 3;

#[derive(Parser)]
#[command(
    name = "cotrace",
    version,
    about = "Traces, cotraces and lifts in Rel, Span and Prof"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum, PartialEq, Eq)]
enum Format {
    Text,
    Json,
}

#[derive(Args)]
struct Common {
    /// Instance file to read.
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Largest candidate count an enumeration may walk.
    #[arg(long, default_value_t = Limits::default().max_candidates)]
    budget: u64,
}

#[derive(Subcommand)]
enum Command {
    /// Trace of an endo-1-cell, as a scalar.
    Trace {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        cell: String,
    },
    /// Cotrace of an endo-1-cell, as a scalar.
    Cotrace {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        cell: String,
    },
    /// Right lift `f⊸g`, given as `--cells f,g`.
    Lift {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_parser = parse_pair)]
        cells: (String, String),
    },
    /// Right extension `g⟜f`, given as `--cells g,f`.
    Ext {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_parser = parse_pair)]
        cells: (String, String),
    },
    /// Enrichment hom between parallel 1-cells, given as `--cells f,g`.
    EnrichHom {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_parser = parse_pair)]
        cells: (String, String),
    },
    /// Dimension and codimension of an object.
    Dims {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        object: String,
    },
    /// The 2-cells from the identity into an endo-1-cell.
    TwoTrace {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        cell: String,
    },
    /// Runs the law suite on generated cases, or on the cells of `--input`.
    CheckLaws(CheckLaws),
}

#[derive(Args)]
struct CheckLaws {
    #[arg(long)]
    input: Option<PathBuf>,
    /// Law ids to run; repeatable. Defaults to all.
    #[arg(long = "law")]
    laws: Vec<String>,
    /// Instances to run on generated cases; repeatable. Defaults to all.
    #[arg(long = "instance", value_parser = parse_instance)]
    instances: Vec<Instance>,
    #[arg(long, default_value_t = 3)]
    max_size: usize,
    #[arg(long, default_value_t = 200)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Writes the JSON report here, with witness files beside it.
    #[arg(long)]
    report: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Injects a fault: drop-lift-element.
    #[arg(long, value_parser = parse_mutation)]
    mutate: Option<Mutation>,
    #[arg(long, default_value_t = Limits::default().max_candidates)]
    budget: u64,
    #[arg(long)]
    threads: Option<usize>,
}

fn parse_instance(s: &str) -> Result<Instance, String> {
    match s {
        "rel" => Ok(Instance::Rel),
        "span" => Ok(Instance::Span),
        "prof" => Ok(Instance::Prof),
        _ => Err(format!(
            "unknown instance {s:?}; expected rel, span or prof"
        )),
    }
}

fn parse_pair(s: &str) -> Result<(String, String), String> {
    match s.split_once(',') {
        Some((a, b)) if !a.is_empty() && !b.is_empty() && !b.contains(',') => {
            Ok((a.to_string(), b.to_string()))
        }
        _ => Err(format!("expected two cell names as NAME,NAME, got {s:?}")),
    }
}

fn parse_mutation(s: &str) -> Result<Mutation, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// A failure with its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = if e.is_budget() {
            EXIT_BUDGET
        } else {
            EXIT_INPUT
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn input_error(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_INPUT,
        message: message.into(),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_INPUT } else { 0 });
        }
    };
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

/// Prints a line, treating a closed stdout as done rather than an error.
fn say(text: &str) {
    use std::io::Write;
    let _ = writeln!(std::io::stdout().lock(), "{text}");
}

fn read_file(path: &Path) -> Result<InstanceFile, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| input_error(format!("{}: {e}", path.display())))?;
    InstanceFile::parse(&text).map_err(|e| input_error(format!("{}: {e}", path.display())))
}

fn limits(budget: u64) -> Limits {
    Limits {
        max_candidates: budget,
    }
}

fn run(command: Command) -> Result<u8, Failure> {
    if let Command::CheckLaws(args) = command {
        return check_laws(args);
    }
    let common = match &command {
        Command::Trace { common, .. }
        | Command::Cotrace { common, .. }
        | Command::Lift { common, .. }
        | Command::Ext { common, .. }
        | Command::EnrichHom { common, .. }
        | Command::Dims { common, .. }
        | Command::TwoTrace { common, .. } => common,
        Command::CheckLaws(_) => unreachable!("handled above"),
    };
    let file = read_file(&common.input)?;
    let lim = limits(common.budget);
    let out = match &file {
        InstanceFile::Rel(n) => query(&Rel::new(lim), n, &command, InstanceFile::Rel)?,
        InstanceFile::Span(n) => query(&Span::new(lim), n, &command, InstanceFile::Span)?,
        InstanceFile::Prof(n) => query(&Prof::new(lim), n, &command, InstanceFile::Prof)?,
    };
    match common.format {
        Format::Json => say(&serde_json::to_string_pretty(&out.json).expect("values serialize")),
        Format::Text => say(&out.text),
    }
    Ok(0)
}

struct Output {
    text: String,
    json: Value,
}

fn cell<'a, C>(named: &'a BTreeMap<String, C>, name: &str) -> Result<&'a C, Failure> {
    named
        .get(name)
        .ok_or_else(|| input_error(format!("no cell named {name:?}")))
}

fn scalar_output<B: Concrete>(b: &B, s: &B::Cell) -> Output {
    let n = b.scalar_size(s);
    let text = match b.instance() {
        Instance::Rel => if n == 0 { "∅" } else { "*" }.to_string(),
        _ => n.to_string(),
    };
    Output {
        json: json!({ "instance": b.instance(), "size": n, "elements": b.scalar_labels(s) }),
        text,
    }
}

fn query<B: Concrete>(
    b: &B,
    n: &Named<B::Obj, B::Cell>,
    command: &Command,
    wrap: fn(Named<B::Obj, B::Cell>) -> InstanceFile,
) -> Result<Output, Failure> {
    let endo = |name: &str| -> Result<&B::Cell, Failure> {
        let f = cell(&n.cells, name)?;
        if b.src(f) != b.tgt(f) {
            return Err(input_error(format!("cell {name:?} is not an endo-1-cell")));
        }
        Ok(f)
    };
    let result_file = |name: &str, c: B::Cell| {
        let file = wrap(Named {
            objects: n.objects.clone(),
            cells: BTreeMap::from([(name.to_string(), c)]),
        });
        let json = file.to_json();
        Output {
            text: file.to_string_pretty(),
            json,
        }
    };
    Ok(match command {
        Command::Trace { cell, .. } => scalar_output(b, &b.trace_closed(endo(cell)?)?),
        Command::Cotrace { cell, .. } => scalar_output(b, &b.cotrace_closed(endo(cell)?)?),
        Command::EnrichHom { cells, .. } => {
            let (f, g) = (
                self::cell(&n.cells, &cells.0)?,
                self::cell(&n.cells, &cells.1)?,
            );
            let hom = bicat::HomObject::new(b, f, g)?;
            scalar_output(b, &hom.scalar)
        }
        Command::Lift { cells, .. } => {
            let (f, g) = (
                self::cell(&n.cells, &cells.0)?,
                self::cell(&n.cells, &cells.1)?,
            );
            if b.tgt(f) != b.tgt(g) {
                return Err(input_error("lift needs cells with a shared target"));
            }
            result_file("lift", b.lift(f, g)?.cell)
        }
        Command::Ext { cells, .. } => {
            let (g, f) = (
                self::cell(&n.cells, &cells.0)?,
                self::cell(&n.cells, &cells.1)?,
            );
            result_file("ext", bicat::extension(b, g, f)?)
        }
        Command::Dims { object, .. } => {
            let a = n
                .objects
                .get(object)
                .ok_or_else(|| input_error(format!("no object named {object:?}")))?;
            let id = b.identity(a);
            let (d, c) = (
                scalar_output(b, &b.trace_closed(&id)?),
                scalar_output(b, &b.cotrace_closed(&id)?),
            );
            Output {
                text: format!("Dim={}, coDim={}", d.text, c.text),
                json: json!({ "instance": b.instance(), "dim": d.json, "codim": c.json }),
            }
        }
        Command::TwoTrace { cell, .. } => {
            let f = endo(cell)?;
            let cells = bicat::two_trace(b, f)?;
            let labels = b.scalar_labels(&b.cotrace_closed(f)?);
            let mut elements = Vec::with_capacity(cells.len());
            for c in &cells {
                elements.push(labels[b.cotrace_index(f, c)?].clone());
            }
            Output {
                text: cells.len().to_string(),
                json: json!({ "instance": b.instance(), "size": cells.len(), "elements": elements }),
            }
        }
        Command::CheckLaws(_) => unreachable!("handled by check_laws"),
    })
}

fn check_laws(args: CheckLaws) -> Result<u8, Failure> {
    let mut cfg = SuiteConfig {
        seed: args.seed,
        samples: args.samples,
        max_size: args.max_size,
        laws: (!args.laws.is_empty()).then(|| args.laws.clone()),
        limits: limits(args.budget),
        mutate: args.mutate,
        ..SuiteConfig::default()
    };
    if !args.instances.is_empty() {
        cfg.instances = args.instances.clone();
    }
    if let Some(t) = args.threads {
        cfg.threads = t;
    }
    cfg.validate()?;
    let mut reports = match &args.input {
        Some(path) => {
            let file = read_file(path)?;
            laws::run_on_file(&file, &cfg)?
        }
        None => laws::run_law_suite(&cfg)?,
    };
    if let Some(path) = &args.report {
        write_witnesses(path, &mut reports)?;
        let text = serde_json::to_string_pretty(&reports).expect("reports serialize");
        std::fs::write(path, text + "\n")
            .map_err(|e| input_error(format!("{}: {e}", path.display())))?;
    }
    match args.format {
        Format::Json => say(&serde_json::to_string_pretty(&reports).expect("reports serialize")),
        Format::Text => {
            for r in &reports {
                let mut line = format!(
                    "{:<16} {:<30} {:<5} cases={}",
                    r.status.as_str(),
                    r.law,
                    r.instance.as_str(),
                    r.cases
                );
                if let Some(w) = &r.witness {
                    line.push_str(&format!("\n    {}", w.detail));
                    if !w.replay.is_empty() {
                        line.push_str(&format!("\n    replay: cotrace {}", w.replay.join(" ")));
                    }
                }
                say(&line);
            }
            let failed = reports.iter().filter(|r| r.status != Status::Pass).count();
            say(&format!(
                "{} of {} reports pass",
                reports.len() - failed,
                reports.len()
            ));
        }
    }
    Ok(exit_code(&reports))
}

fn exit_code(reports: &[LawReport]) -> u8 {
    if reports.iter().any(|r| r.status == Status::Counterexample) {
        EXIT_COUNTEREXAMPLE
    } else if reports.iter().any(|r| r.status == Status::BudgetExceeded) {
        EXIT_BUDGET
    } else {
        0
    }
}

/// Saves each witness input next to the report and points its replay
/// arguments at the saved file.
fn write_witnesses(report: &Path, reports: &mut [LawReport]) -> Result<(), Failure> {
    for r in reports.iter_mut() {
        let Some(w) = r.witness.as_mut() else {
            continue;
        };
        if w.input.is_null() {
            continue;
        }
        let name = format!(
            "{}.{}.{}.witness.json",
            report
                .file_stem()
                .and_then(|s| s.to_str())
                .unwrap_or("report"),
            r.law,
            r.instance.as_str()
        );
        let path = report.with_file_name(name);
        let text = serde_json::to_string_pretty(&w.input).expect("instance files serialize");
        std::fs::write(&path, text + "\n")
            .map_err(|e| input_error(format!("{}: {e}", path.display())))?;
        for arg in &mut w.replay {
            if arg == laws::WITNESS_PATH {
                *arg = path.display().to_string();
            }
        }
    }
    Ok(())
}
