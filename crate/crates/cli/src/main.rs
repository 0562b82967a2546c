use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use crossnorm_core::rational::{self, Rational};
use crossnorm_core::theorems::{verify, TheoremId};
use crossnorm_core::{check_document, Crossnorm, Error, WorkDocument, Workspace};

/// Exact crossnorm calculator and property checker.
#[derive(Debug, Parser)]
#[command(name = "crossnorm", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate every assertion in a document.
    Check { doc: PathBuf },
    /// Pointwise norm of an element, homomorphism or bilinear form.
    Norm { doc: PathBuf, name: String },
    /// Pointwise crossnorm of a tensor.
    Tensor {
        flavor: Crossnorm,
        doc: PathBuf,
        name: String,
    },
    /// Run a seeded property suite.
    Verify {
        theorem: TheoremId,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        cases: u64,
        /// Tolerance for floating comparisons, as `p/q` or a decimal.
        #[arg(long, value_parser = parse_tol)]
        tol: Option<Rational>,
    },
    /// Run every property suite and summarize.
    Report {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 20)]
        cases: u64,
    },
}

fn parse_tol(s: &str) -> Result<Rational, String> {
    let q = rational::parse(s)
        .or_else(|_| {
            s.parse::<f64>()
                .map(rational::from_f64)
                .map_err(|e| e.to_string())
        })
        .map_err(|e| format!("invalid tolerance `{s}`: {e}"))?;
    if q <= Rational::default() {
        return Err(format!("tolerance must be positive, got `{s}`"));
    }
    Ok(q)
}

enum Failure {
    Input(String),
    Io(io::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Self::Input(e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Self::Io(e)
    }
}

fn load(path: &Path) -> Result<WorkDocument, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::Input(format!("cannot read {}: {e}", path.display())))?;
    Ok(WorkDocument::parse(&text)?)
}

/// Runs a command; `Ok(true)` when every check passed.
fn run(command: Command, out: &mut impl Write) -> Result<bool, Failure> {
    match command {
        Command::Check { doc } => {
            let results = check_document(&load(&doc)?)?;
            for (k, r) in results.iter().enumerate() {
                writeln!(out, "CASE {k}: {r}")?;
            }
            let passed = results.iter().filter(|r| r.pass).count();
            writeln!(out, "{passed}/{} assertions passed", results.len())?;
            Ok(passed == results.len())
        }
        Command::Norm { doc, name } => {
            let ws = Workspace::resolve(&load(&doc)?)?;
            writeln!(out, "{name}: {}", ws.norm_of(&name)?)?;
            Ok(true)
        }
        Command::Tensor { flavor, doc, name } => {
            let ws = Workspace::resolve(&load(&doc)?)?;
            writeln!(out, "{name} ({flavor}): {}", ws.tensor_norm(&name, flavor)?)?;
            Ok(true)
        }
        Command::Verify {
            theorem,
            seed,
            cases,
            tol,
        } => {
            let reports = verify(theorem, seed, cases, tol.as_ref());
            for r in &reports {
                writeln!(
                    out,
                    "CASE {}: {} {}",
                    r.index,
                    if r.pass { "PASS" } else { "FAIL" },
                    r.detail
                )?;
                if !r.pass {
                    writeln!(out, "{}", r.document.to_json())?;
                }
            }
            let passed = reports.iter().filter(|r| r.pass).count();
            writeln!(out, "{theorem}: {passed}/{cases} passed (seed {seed})")?;
            Ok(passed == reports.len())
        }
        Command::Report { seed, cases } => {
            let mut all = true;
            for id in TheoremId::ALL {
                let reports = verify(id, seed, cases, None);
                let passed = reports.iter().filter(|r| r.pass).count();
                let ok = passed == reports.len();
                all &= ok;
                writeln!(
                    out,
                    "{} {id}: {passed}/{cases} ({})",
                    if ok { "PASS" } else { "FAIL" },
                    id.description()
                )?;
            }
            Ok(all)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match run(cli.command, &mut out) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Input(msg)) => {
            let _ = out.flush();
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Io(e)) if e.kind() == io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(Failure::Io(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
