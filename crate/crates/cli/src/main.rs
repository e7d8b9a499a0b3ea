//! `meterbench`: resolution and back-action sweeps for system-meter scenarios.

mod commands;
mod error;
mod plot;
mod report;

use std::ops::RangeInclusive;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use error::{CliError, CliResult};
use report::Format;

#[derive(Parser)]
#[command(name = "meterbench", version, about = "Resolution and back-action sweeps for system-meter measurement scenarios")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sweep the Hellinger resolution R(ε) and report Fisher information and δε.
    Resolve(SweepArgs),
    /// Sweep the decoherence D(ε) and report the decoherence-free distance.
    Decohere(SweepArgs),
    /// Audit F ≤ 4ΔB²/ħ², D(ε) ≥ R(ε) and δA ≥ C_A; exits 1 on any violation.
    Bounds(BoundsArgs),
    /// Draw R(ε) and D(ε) from a resolve or decohere output as SVG.
    Plot(PlotArgs),
}

#[derive(Args)]
struct OutputArgs {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Write to this file instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    /// Scenario file.
    scenario: PathBuf,
    #[command(flatten)]
    output: OutputArgs,
    /// Use a geometric ε grid between the sweep endpoints.
    #[arg(long)]
    log_eps: bool,
}

#[derive(Args)]
struct BoundsArgs {
    /// Scenario file.
    #[arg(required_unless_present = "random", conflicts_with = "random")]
    scenario: Option<PathBuf>,
    /// Audit seeded random scenarios, e.g. `1..100` (inclusive).
    #[arg(long, value_parser = parse_seeds)]
    random: Option<RangeInclusive<u64>>,
    /// System and meter dimensions for random scenarios.
    #[arg(long, value_parser = parse_dims, default_value = "3x4")]
    dims: (usize, usize),
    #[command(flatten)]
    output: OutputArgs,
    /// Use a geometric ε grid between the sweep endpoints.
    #[arg(long)]
    log_eps: bool,
}

#[derive(Args)]
struct PlotArgs {
    /// Output of `resolve` or `decohere`, CSV or JSON.
    sweep: PathBuf,
    /// Write the SVG here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_seeds(s: &str) -> Result<RangeInclusive<u64>, String> {
    let (a, b) = s.split_once("..").ok_or("expected A..B")?;
    let a: u64 = a.trim().parse().map_err(|e| format!("start: {e}"))?;
    let b: u64 = b.trim().trim_start_matches('=').parse().map_err(|e| format!("end: {e}"))?;
    if a > b {
        return Err(format!("empty range {a}..{b}"));
    }
    Ok(a..=b)
}

fn parse_dims(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s.split_once(['x', 'X']).ok_or("expected NxM")?;
    let a = a.parse().map_err(|e| format!("system dimension: {e}"))?;
    let b = b.parse().map_err(|e| format!("meter dimension: {e}"))?;
    Ok((a, b))
}

fn emit(text: &str, out: Option<&Path>) -> CliResult<()> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        }),
        None => {
            use std::io::Write;
            std::io::stdout().write_all(text.as_bytes()).map_err(|source| CliError::Io {
                path: "<stdout>".into(),
                source,
            })
        }
    }
}

fn run(cli: Cli) -> CliResult<ExitCode> {
    match cli.command {
        Command::Resolve(a) => {
            let report = commands::resolve(&a.scenario, a.log_eps)?;
            emit(&report.render(a.output.format), a.output.out.as_deref())?;
        }
        Command::Decohere(a) => {
            let report = commands::decohere(&a.scenario, a.log_eps)?;
            emit(&report.render(a.output.format), a.output.out.as_deref())?;
        }
        Command::Bounds(a) => {
            let (report, ok) = commands::bounds(a.scenario.as_deref(), a.random, a.dims, a.log_eps)?;
            emit(&report.render(a.output.format), a.output.out.as_deref())?;
            if !ok {
                eprintln!("meterbench: bound violation detected");
                return Ok(ExitCode::from(1));
            }
        }
        Command::Plot(a) => {
            let svg = commands::plot(&a.sweep)?;
            emit(&svg, a.out.as_deref())?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("meterbench: error: {e}");
            e.exit_code()
        }
    }
}
