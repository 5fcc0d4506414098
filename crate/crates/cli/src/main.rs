//! `kspectral`: command-line front end for the numerical-range experiments.
//!
//! Every subcommand prints a JSON report on standard output. Exit status is
//! 0 on success, 2 for bad input or violated preconditions and 3 when the
//! numerics fail. `CROUZEIX_THREADS` caps the worker count.

mod commands;
mod matrix_file;
mod report;
mod svg;

use std::fmt;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};

use commands::*;

#[derive(Debug)]
pub enum CliError {
    Input(String),
    Core(kspectral::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(e) if e.is_numerical() => 3,
            _ => 2,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Input(msg) => f.write_str(msg),
            CliError::Core(e) => write!(f, "{e}"),
        }
    }
}

impl From<kspectral::Error> for CliError {
    fn from(e: kspectral::Error) -> Self {
        CliError::Core(e)
    }
}

#[derive(Debug, Parser)]
#[command(name = "kspectral", version, about = "Numerical ranges, ψ(A) and K-spectral constants")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Sample the boundary of W(A); optional CSV and SVG output.
    Boundary(BoundaryArgs),
    /// ψ(A) through the conformal map of W(A).
    Psi(PsiArgs),
    /// ψ over the cardioid family, one CSV row per (a, b) cell.
    Table1(Table1Args),
    /// Best-found constant for the strip with d×d matrices.
    Strip(StripArgs),
    /// Best-found constant for the sector of half-angle α.
    Sector(SectorArgs),
    /// Lower and upper bounds for a domain.
    Bounds(BoundsArgs),
    /// Matrices whose numerical range is the unit disk.
    Diskfam(DiskfamArgs),
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var("CROUZEIX_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|n| *n > 0)
        .ok_or_else(|| CliError::Input(format!("CROUZEIX_THREADS must be a positive integer, got `{raw}`")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Input(format!("thread pool: {e}")))
}

fn run(cli: &Cli) -> Result<report::RunReport, CliError> {
    configure_threads()?;
    let start = Instant::now();
    let mut report = match &cli.command {
        Command::Boundary(a) => run_boundary(a),
        Command::Psi(a) => run_psi(a),
        Command::Table1(a) => run_table1_command(a),
        Command::Strip(a) => run_strip(a),
        Command::Sector(a) => run_sector(a),
        Command::Bounds(a) => run_bounds(a),
        Command::Diskfam(a) => run_diskfam(a),
    }?;
    report.seconds = start.elapsed().as_secs_f64();
    Ok(report)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(report) => {
            println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
