//! Command-line front end: generate polynomials and operators, run
//! verification suites, and scan the admissibility conjecture.
//!
//! Exit codes: 0 pass, 1 identity failure, 2 configuration error,
//! 3 internal computation error.

mod config;
mod generate;
mod scan;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use config::CliResult;

#[derive(Debug, Parser)]
#[command(name = "exop", version, about = "Exceptional Charlier and Hermite polynomials in exact arithmetic")]
struct Cli {
    /// Worker threads (default: available cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Output file (default: stdout).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Write polynomials, determinants and operators as JSON (or grid values as CSV).
    Generate(generate::GenerateArgs),
    /// Run identity suites; exits 1 if a proved identity fails.
    Verify(verify::VerifyArgs),
    /// Scan Wronskian zeros over all sets with bounded maximum, as JSON lines.
    Scan(scan::ScanArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FamilyName {
    Charlier,
    Hermite,
}

impl FamilyName {
    pub fn name(self) -> &'static str {
        match self {
            Self::Charlier => "charlier",
            Self::Hermite => "hermite",
        }
    }
}

fn run(cli: &Cli) -> CliResult<bool> {
    if let Some(jobs) = cli.jobs {
        if jobs == 0 {
            return Err(config::config("--jobs must be positive"));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
            .map_err(|e| config::config(format!("--jobs: {e}")))?;
    }
    match &cli.command {
        Command::Generate(args) => generate::run(args, &cli.out).map(|()| true),
        Command::Verify(args) => verify::run(args, &cli.out),
        Command::Scan(args) => scan::run(args, &cli.out),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
