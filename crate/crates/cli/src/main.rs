use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;
mod outcome;

use outcome::{Failure, Outcome};

#[derive(Parser)]
#[command(
    name = "hilbheis",
    version,
    about = "Heisenberg actions, Macdonald transforms and BPS numbers for curves"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a quartet file and check the commutation relations.
    Verify(Common),
    /// Decompose a quartet into lowest-weight space, D-grading and stabilization data.
    Decompose(Common),
    /// Generate data files for a model spec.
    Curve(CurveArgs),
    /// BPS numbers of an Euler series, by both routes.
    Bps(Common),
    /// Macdonald transform between Poincaré families and D-graded polynomials.
    Macdonald(MacdonaldArgs),
    /// Run every applicable check on a model spec.
    Report(CurveArgs),
}

#[derive(Args, Clone)]
pub struct Common {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long)]
    pub genus: Option<u32>,
    #[arg(long)]
    pub truncation: Option<usize>,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    pub format: Format,
}

#[derive(Args, Clone)]
pub struct CurveArgs {
    #[command(flatten)]
    pub common: Common,
    /// Worker threads for ideal enumeration.
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
    /// Allow colengths beyond the default enumeration cap.
    #[arg(long)]
    pub force: bool,
}

#[derive(Args, Clone)]
pub struct MacdonaldArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, value_enum)]
    pub direction: Direction,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Table,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Direction {
    Fwd,
    Inv,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (format, result) = match &cli.command {
        Command::Verify(a) => (a.format, commands::verify(a)),
        Command::Decompose(a) => (a.format, commands::decompose(a)),
        Command::Curve(a) => (a.common.format, commands::curve(a)),
        Command::Bps(a) => (a.format, commands::bps(a)),
        Command::Macdonald(a) => (a.common.format, commands::macdonald(a)),
        Command::Report(a) => (a.common.format, commands::report(a)),
    };
    match result {
        Ok(outcome) => finish(outcome, format),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn finish(outcome: Outcome, format: Format) -> ExitCode {
    match format {
        Format::Json => print!("{}", hilbheis_core::io::to_json(&outcome.report)),
        Format::Table => print!("{}", outcome.table),
    }
    let failed: Vec<_> = outcome.failed().collect();
    if failed.is_empty() {
        ExitCode::SUCCESS
    } else {
        for c in &failed {
            eprintln!("check failed: {}: {}", c.name, c.detail);
        }
        ExitCode::from(Failure::MATH)
    }
}
