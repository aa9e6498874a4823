//! `opgeo`: classify operators, emit and check certificates, run the
//! property suites.
//!
//! Exit codes: 0 success, 1 harness failure, 2 input error, 3 precondition
//! violation, 4 no certificate or certificate rejected.

use std::fmt::Write as _;
use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use opgeo_core::classify::{recover_adjoint, ClassifierConfig, IdentifiedUnit};
use opgeo_core::document::{to_json_17, OperatorDocument};
use opgeo_core::harness::{default_shapes, run_suite, HarnessReport, Suite, TrialConfig};
use opgeo_core::report::{certify, classify_report, verify, CertificateDocument, CertifiedPredicate, ToolInfo};
use opgeo_core::{AlgebraShape, Element, Error, Tolerances};
use serde::Serialize;

#[derive(Parser)]
#[command(name = "opgeo", version, about = "Norm-geometric classification of operators")]
struct Cli {
    /// Override one tolerance level, e.g. `--tol equality=1e-9`. Repeatable.
    #[arg(long = "tol", value_name = "LEVEL=VALUE", global = true, value_parser = parse_tol)]
    tol: Vec<(Level, f64)>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every applicable classifier on an operator document.
    Classify {
        /// Operator document, or `-` for standard input.
        input: PathBuf,
        /// Identified unit: `identity` or a path to an operator document.
        #[arg(long)]
        unit: Option<String>,
    },
    /// Emit a certificate, or check one with `--verify`.
    Certify {
        input: PathBuf,
        #[arg(long, value_enum, default_value = "invertible")]
        predicate: PredicateArg,
        /// Certificate file to check against the operator.
        #[arg(long, value_name = "CERT")]
        verify: Option<PathBuf>,
    },
    /// Run the seeded property suites.
    Harness {
        #[arg(long, env = "OPGEO_SEED", default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        /// Comma-separated suite names (default: all).
        #[arg(long, value_delimiter = ',')]
        suites: Vec<String>,
        /// Comma-separated shapes; `2+3` is M₂ ⊕ M₃ (default: 2,4,6,2+3).
        #[arg(long, value_delimiter = ',')]
        shapes: Vec<String>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        /// Include wall times. Output is then no longer reproducible.
        #[arg(long)]
        timings: bool,
    },
    /// Print the adjoint recovered from the norm and the unit.
    Adjoint {
        input: PathBuf,
        #[arg(long)]
        unit: Option<String>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum PredicateArg {
    Invertible,
    PartialIsometry,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy)]
enum Level {
    Decomposition,
    Equality,
    Classification,
}

fn parse_tol(s: &str) -> Result<(Level, f64), String> {
    let (name, value) = s.split_once('=').ok_or("expected LEVEL=VALUE")?;
    let level = match name.trim() {
        "decomposition" => Level::Decomposition,
        "equality" => Level::Equality,
        "classification" => Level::Classification,
        other => return Err(format!("unknown tolerance level `{other}`")),
    };
    let value: f64 = value.trim().parse().map_err(|e| format!("{e}"))?;
    if !(value.is_finite() && value > 0.0) {
        return Err("tolerance must be positive".into());
    }
    Ok((level, value))
}

/// A failed command: exit code and message.
struct Failure(u8, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Parse(_)
            | Error::InvalidShape(_)
            | Error::ShapeMismatch(_)
            | Error::DimensionMismatch(_)
            | Error::NonFinite
            | Error::UnknownSuite(_)
            | Error::InvalidConfig(_) => 2,
            Error::MalformedCertificate(_) => 4,
            _ => 3,
        };
        Failure(code, e.to_string())
    }
}

fn input_error(e: impl std::fmt::Display) -> Failure {
    Failure(2, e.to_string())
}

fn read_input(path: &Path) -> Result<Vec<u8>, Failure> {
    if path == Path::new("-") {
        let mut buf = Vec::new();
        std::io::stdin().read_to_end(&mut buf).map_err(input_error)?;
        Ok(buf)
    } else {
        std::fs::read(path).map_err(|e| input_error(format!("{}: {e}", path.display())))
    }
}

fn read_document(path: &Path) -> Result<(OperatorDocument, Vec<u8>), Failure> {
    let bytes = read_input(path)?;
    let text = std::str::from_utf8(&bytes).map_err(input_error)?;
    Ok((OperatorDocument::parse(text)?, bytes))
}

/// The unit from `--unit`, else from the document. Returns the unit and
/// how it was given.
fn resolve_unit(
    flag: Option<&str>,
    doc: &OperatorDocument,
    cfg: &ClassifierConfig,
) -> Result<Option<(IdentifiedUnit, &'static str)>, Failure> {
    let (element, kind) = match flag {
        Some("identity") => (Element::unit(&doc.shape), "identity"),
        Some(path) => {
            let (u, _) = read_document(Path::new(path))?;
            (u.element()?, "explicit")
        }
        None => match doc.unit_element()? {
            None => return Ok(None),
            Some(u) if u == Element::unit(&doc.shape) => (u, "identity"),
            Some(u) => (u, "explicit"),
        },
    };
    element.require_same_shape(&doc.element()?)?;
    Ok(Some((IdentifiedUnit::new(element, cfg)?, kind)))
}

fn emit<T: Serialize + ?Sized>(value: &T) -> Result<String, Failure> {
    Ok(to_json_17(value)?)
}

fn classify(cfg: &ClassifierConfig, input: &Path, unit: Option<&str>) -> Result<String, Failure> {
    let (doc, bytes) = read_document(input)?;
    let x = doc.element()?;
    let unit = resolve_unit(unit, &doc, cfg)?;
    let report = classify_report(&x, unit.as_ref().map(|(u, k)| (u, *k)), doc.label.clone(), &bytes, cfg)?;
    emit(&report)
}

fn certify_cmd(
    cfg: &ClassifierConfig,
    input: &Path,
    predicate: PredicateArg,
    cert: Option<&Path>,
) -> Result<String, Failure> {
    let (doc, _) = read_document(input)?;
    let x = doc.element()?;
    if let Some(path) = cert {
        let bytes = read_input(path)?;
        let cert: CertificateDocument = serde_json::from_slice(&bytes).map_err(input_error)?;
        let check = verify(&x, &cert, cfg)?;
        let out = emit(&check)?;
        if !check.accepted() {
            print!("{out}");
            return Err(Failure(4, "certificate rejected".into()));
        }
        return Ok(out);
    }
    let predicate = match predicate {
        PredicateArg::Invertible => CertifiedPredicate::Invertible,
        PredicateArg::PartialIsometry => CertifiedPredicate::PartialIsometry,
    };
    match certify(&x, predicate, cfg)? {
        Some(c) => emit(&c),
        None => Err(Failure(4, "no certificate".into())),
    }
}

#[derive(Serialize)]
struct HarnessDocument<'a> {
    tool: ToolInfo,
    report: &'a HarnessReport,
}

fn text_report(r: &HarnessReport) -> String {
    let mut out = String::new();
    let shapes: Vec<String> = r.shapes.iter().map(|s| s.to_string()).collect();
    writeln!(out, "seed {}  trials {}  shapes {}", r.seed, r.trials, shapes.join(" ")).unwrap();
    for s in &r.suites {
        let status = if s.ok() { "pass" } else { "FAIL" };
        write!(
            out,
            "{:<6} {status}  {}/{}  max deviation {:.3e}",
            s.suite.name(),
            s.passed,
            s.trials,
            s.max_deviation
        )
        .unwrap();
        if let Some(ms) = s.wall_time_ms {
            write!(out, "  {ms:.1} ms").unwrap();
        }
        out.push('\n');
        for f in &s.failures {
            writeln!(
                out,
                "  trial {} seed {:#018x} shape {} deviation {:.3e}: {}",
                f.trial, f.seed, f.shape, f.deviation, f.detail
            )
            .unwrap();
        }
    }
    writeln!(out, "{}", if r.passed { "all suites passed" } else { "FAILED" }).unwrap();
    out
}

fn harness(
    tolerances: Tolerances,
    seed: u64,
    trials: usize,
    suites: &[String],
    shapes: &[String],
    format: Format,
    timings: bool,
) -> Result<String, Failure> {
    let suites = if suites.is_empty() {
        Suite::ALL.to_vec()
    } else {
        suites
            .iter()
            .map(|s| s.parse::<Suite>())
            .collect::<Result<Vec<_>, _>>()?
    };
    let shapes = if shapes.is_empty() {
        default_shapes()
    } else {
        shapes
            .iter()
            .map(|s| s.parse::<AlgebraShape>())
            .collect::<Result<Vec<_>, _>>()?
    };
    let cfg = TrialConfig {
        seed,
        trials,
        shapes,
        tolerances,
        suites,
        timings,
    };
    let report = run_suite(&cfg)?;
    let out = match format {
        Format::Json => emit(&HarnessDocument {
            tool: ToolInfo::default(),
            report: &report,
        })?,
        Format::Text => text_report(&report),
    };
    if report.passed {
        return Ok(out);
    }
    print!("{out}");
    let seeds: Vec<String> = report
        .suites
        .iter()
        .flat_map(|s| {
            s.failures
                .iter()
                .map(move |f| format!("{}#{} seed {:#018x}", s.suite, f.trial, f.seed))
        })
        .collect();
    Err(Failure(1, format!("failing trials: {}", seeds.join(", "))))
}

fn adjoint(cfg: &ClassifierConfig, input: &Path, unit: Option<&str>) -> Result<String, Failure> {
    let (doc, _) = read_document(input)?;
    let x = doc.element()?;
    let Some((unit, _)) = resolve_unit(unit, &doc, cfg)? else {
        return Err(Failure(
            3,
            "the adjoint needs an identified unit (--unit or a `unit` field)".into(),
        ));
    };
    let label = doc.label.as_ref().map(|l| format!("adjoint of {l}"));
    let mut out = OperatorDocument::from_element(&recover_adjoint(&x, &unit, cfg)?, label).to_json();
    out.push('\n');
    Ok(out)
}

fn run(cli: Cli) -> Result<String, Failure> {
    let mut tolerances = Tolerances::default();
    for (level, value) in cli.tol {
        match level {
            Level::Decomposition => tolerances.decomposition = value,
            Level::Equality => tolerances.equality = value,
            Level::Classification => tolerances.classification = value,
        }
    }
    let cfg = ClassifierConfig::with_tolerances(tolerances);
    match &cli.command {
        Command::Classify { input, unit } => classify(&cfg, input, unit.as_deref()),
        Command::Certify {
            input,
            predicate,
            verify,
        } => certify_cmd(&cfg, input, *predicate, verify.as_deref()),
        Command::Harness {
            seed,
            trials,
            suites,
            shapes,
            format,
            timings,
        } => harness(tolerances, *seed, *trials, suites, shapes, *format, *timings),
        Command::Adjoint { input, unit } => adjoint(&cfg, input, unit.as_deref()),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(Failure(code, msg)) => {
            eprintln!("opgeo: {msg}");
            ExitCode::from(code)
        }
    }
}
