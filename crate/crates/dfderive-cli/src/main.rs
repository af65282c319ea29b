//! Scenario-driven CLI: `verify` runs check-style tasks, `oracle` runs
//! theorem oracles and lemma suites, `enumerate` runs map enumerations, and
//! `report` re-renders a report document.
//!
//! Exit codes: 0 pass, 1 verdict failure, 2 usage/parse error,
//! 3 hypothesis/validation failure.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use dfderive::error::Error;
use dfderive::exec::{exit_code, run_scenario, Verb};
use dfderive::report::{parse_report, strip_timing, RunReport};
use dfderive::scenario::{parse_file, Overrides};

#[derive(Parser)]
#[command(name = "dfderive", about = "exact checks, enumerations, and oracles for module derivations", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Args)]
struct RunArgs {
    /// Scenario file (JSON).
    scenario: PathBuf,

    /// Where to write the report (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,

    #[arg(long, value_enum, default_value = "text")]
    format: Format,

    /// Override the scenario's probe seed.
    #[arg(long)]
    seed: Option<u64>,

    /// Override the probe degree bound.
    #[arg(long)]
    probe_degree: Option<usize>,

    /// Candidate budget for enumerations.
    #[arg(long)]
    budget: Option<u64>,

    /// Worker partitions for parallel scans; verdicts do not depend on it.
    #[arg(long)]
    partitions: Option<usize>,

    /// Strip timing fields from the emitted report (regression mode).
    #[arg(long)]
    strip_timing: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Run the scenario's check, inclusion, evaluation, and structure tasks.
    Verify(RunArgs),
    /// Run the scenario's oracle and lemma-suite tasks.
    Oracle(RunArgs),
    /// Run the scenario's enumeration tasks.
    Enumerate(RunArgs),
    /// Re-render a report document.
    Report {
        report: PathBuf,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
}

fn error_exit(e: &Error) -> u8 {
    match e {
        Error::ParseError(_) | Error::ResolveError(_) | Error::Io(_) => 2,
        Error::DeclaredFactRefuted { .. }
        | Error::ValidationError(_)
        | Error::HypothesisFailed { .. }
        | Error::HypothesisUnmet { .. }
        | Error::NotInvariant { .. }
        | Error::ClosureFailure(_) => 3,
        _ => 1,
    }
}

fn run(verb: Verb, args: &RunArgs) -> u8 {
    let overrides = Overrides {
        seed: args.seed,
        probe_degree: args.probe_degree,
        budget: args.budget,
        partitions: args.partitions,
    };
    let scenario = match parse_file(&args.scenario, &overrides) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {}", e);
            return error_exit(&e);
        }
    };
    let report = run_scenario(&scenario, verb);
    if let Err(e) = emit(&report, args) {
        eprintln!("error: {}", e);
        return 2;
    }
    exit_code(&report) as u8
}

fn emit(report: &RunReport, args: &RunArgs) -> std::io::Result<()> {
    let text = match args.format {
        Format::Text => report.render_text(),
        Format::Json => {
            let mut doc = report.to_json();
            if args.strip_timing {
                doc = strip_timing(&doc);
            }
            format!("{:#}\n", doc)
        }
    };
    match &args.out {
        Some(path) => std::fs::write(path, text),
        None => {
            print!("{}", text);
            Ok(())
        }
    }
}

fn render_report(path: &PathBuf, format: Format) -> u8 {
    let text = match std::fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: {}", e);
            return 2;
        }
    };
    match parse_report(&text) {
        Ok(doc) => {
            match format {
                Format::Json => println!("{:#}", doc),
                Format::Text => {
                    let scenario = doc.get("scenario").and_then(|v| v.as_str()).unwrap_or("?");
                    let verdict = doc.get("verdict").and_then(|v| v.as_str()).unwrap_or("?");
                    println!("scenario {}: {}", scenario, verdict.to_uppercase());
                    if let Some(tasks) = doc.get("tasks").and_then(|v| v.as_array()) {
                        for t in tasks {
                            println!(
                                "  [{}] {} {}: {}",
                                t.get("index").and_then(|v| v.as_u64()).unwrap_or(0),
                                t.get("kind").and_then(|v| v.as_str()).unwrap_or("?"),
                                t.get("name").and_then(|v| v.as_str()).unwrap_or("?"),
                                if t.get("passed").and_then(|v| v.as_bool()).unwrap_or(false) {
                                    "pass"
                                } else {
                                    "FAIL"
                                }
                            );
                        }
                    }
                }
            }
            0
        }
        Err(e) => {
            eprintln!("error: {}", e);
            2
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match &cli.command {
        Command::Verify(args) => run(Verb::Verify, args),
        Command::Oracle(args) => run(Verb::Oracle, args),
        Command::Enumerate(args) => run(Verb::Enumerate, args),
        Command::Report { report, format } => render_report(report, *format),
    };
    ExitCode::from(code)
}
