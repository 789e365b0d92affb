//! Command-line interface: parse a problem file, run the classifiers, emit
//! a machine-readable report.
//!
//! Exit codes: 0 success, 2 validation error, 3 numeric tolerance failure
//! (the report is still emitted, with unknown verdicts).

mod input;
mod json;
mod report;

use clap::{Args, Parser, Subcommand, ValueEnum};
use input::ProblemFile;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "lpq",
    about = "Weighted Hardy constants and L_{p,q}-cohomology triviality classification"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Both Hardy constants of a weighted interval problem
    Hardy(RunArgs),
    /// Cohomology and torsion verdicts for a weighted half-interval
    Interval(RunArgs),
    /// Degree-j verdicts for a warped cylinder
    Cylinder(RunArgs),
    /// Boundary constants, volume, and torsion verdicts for a surface of
    /// revolution
    Surface(RunArgs),
    /// Exact convergence decisions and the improper integral of a function
    Oracle(RunArgs),
    /// Classify a grid of power-law surface profiles
    Sweep(RunArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Table,
}

#[derive(Args)]
struct RunArgs {
    /// Problem file (JSON)
    input: PathBuf,
    /// Write the report here instead of standard output
    #[arg(long)]
    out: Option<PathBuf>,
    /// Write profile samples as CSV (tau,profile_value)
    #[arg(long)]
    emit_profile: Option<PathBuf>,
    /// Override the relative tolerance
    #[arg(long)]
    tol: Option<f64>,
    /// Override the cutoff-doubling budget
    #[arg(long)]
    max_doublings: Option<u32>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (kind, args) = match &cli.command {
        Command::Hardy(a) => ("hardy", a),
        Command::Interval(a) => ("interval", a),
        Command::Cylinder(a) => ("cylinder", a),
        Command::Surface(a) => ("surface", a),
        Command::Oracle(a) => ("oracle", a),
        Command::Sweep(a) => ("sweep", a),
    };
    match execute(kind, args) {
        Ok(code) => ExitCode::from(code),
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}

fn execute(kind: &str, args: &RunArgs) -> Result<u8, String> {
    let text = std::fs::read_to_string(&args.input)
        .map_err(|e| format!("cannot read {}: {e}", args.input.display()))?;
    let file = ProblemFile::parse(&text)?;
    let mut validated = file.validate(kind)?;
    if let Some(rel) = args.tol {
        validated.tolerances.rel_tol = rel;
    }
    if let Some(n) = args.max_doublings {
        validated.tolerances.max_doublings = n;
    }
    validated
        .tolerances
        .validate()
        .map_err(|e| e.to_string())?;

    let profile_path = args
        .emit_profile
        .as_ref()
        .map(|p| p.display().to_string());
    let outcome = report::run(&validated, profile_path.as_deref());

    if let Some(path) = &args.emit_profile {
        let mut csv = String::from("tau,profile_value\n");
        for (tau, value) in &outcome.profile {
            csv.push_str(&format!("{},{}\n", json::sig12(*tau), json::sig12(*value)));
        }
        std::fs::write(path, csv).map_err(|e| format!("cannot write profile CSV: {e}"))?;
    }

    let rendered = match args.format {
        Format::Json => outcome.report.to_string_pretty(),
        Format::Table => report::to_table(&outcome.report),
    };
    match &args.out {
        Some(path) => {
            std::fs::write(path, rendered).map_err(|e| format!("cannot write report: {e}"))?
        }
        None => print!("{rendered}"),
    }
    Ok(outcome.exit as u8)
}
