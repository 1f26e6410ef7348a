use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};

use pq_core::cli::{self, Command, Format, Job, Overrides};
use pq_core::io::to_json_string;
use pq_core::oracle;
use pq_core::PqError;

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Cmd {
    Holonomy,
    Cocycle,
    Classify,
    Compose,
    Periods,
    Moment,
    Verify,
    Converge,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum OutFormat {
    Json,
    Csv,
}

/// Prequantum groupoid numerics: pairings, cocycles, periods and moments.
///
/// Environment: PQ_THREADS caps the number of worker threads.
#[derive(Debug, Parser)]
#[command(name = "pq", version)]
struct Args {
    command: Cmd,
    /// Job file (JSON).
    #[arg(long)]
    job: Option<PathBuf>,
    /// Tolerance for reported checks; replaces every upper-bound threshold in `verify`.
    #[arg(long)]
    tol: Option<f64>,
    /// Supersampling factor per quadrature cell.
    #[arg(long)]
    refine: Option<usize>,
    /// Rows of homotopies built on the fly.
    #[arg(long)]
    rows: Option<usize>,
    /// Sweep resolution for period detection, as SxT.
    #[arg(long, value_parser = parse_resolution)]
    resolution: Option<(usize, usize)>,
    /// Write the report here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    format: OutFormat,
    /// Suite for `verify`: all, paths, integrator, prequantum or symmetry.
    #[arg(long)]
    suite: Option<String>,
    /// Seed for `verify`.
    #[arg(long)]
    seed: Option<u64>,
    /// Recompute the oracle table for the bundled fixtures and write it out.
    #[arg(long)]
    regen_oracles: bool,
}

fn parse_resolution(s: &str) -> Result<(usize, usize), String> {
    cli::parse_resolution(s).map_err(|e| e.to_string())
}

fn command(c: Cmd) -> Command {
    match c {
        Cmd::Holonomy => Command::Holonomy,
        Cmd::Cocycle => Command::Cocycle,
        Cmd::Classify => Command::Classify,
        Cmd::Compose => Command::Compose,
        Cmd::Periods => Command::Periods,
        Cmd::Moment => Command::Moment,
        Cmd::Verify => Command::Verify,
        Cmd::Converge => Command::Converge,
    }
}

fn init_threads() -> Result<(), PqError> {
    let Ok(v) = std::env::var("PQ_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&n| n >= 1)
        .ok_or_else(|| PqError::InvalidConfig(format!("PQ_THREADS must be a positive integer, got \"{v}\"")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| PqError::InvalidConfig(e.to_string()))
}

fn emit(text: &str, out: Option<&PathBuf>) -> Result<(), PqError> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| PqError::Io(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn main_inner(args: &Args) -> Result<i32, PqError> {
    init_threads()?;
    if args.regen_oracles {
        emit(&to_json_string(&oracle::regenerate(), true), args.out.as_ref())?;
        return Ok(0);
    }
    let cmd = command(args.command);
    let job = match &args.job {
        Some(p) => Job::load(p)?,
        None if cmd.job_optional() => Job::empty(),
        None => return Err(PqError::Parse(format!("`{}` needs --job", cmd.name()))),
    };
    let ov = Overrides {
        tol: args.tol,
        refine: args.refine,
        rows: args.rows,
        resolution: args.resolution,
        suite: args.suite.clone(),
        seed: args.seed,
    };
    let report = cli::run(cmd, &job, &ov)?;
    let format = match args.format {
        OutFormat::Json => Format::Json,
        OutFormat::Csv => Format::Csv,
    };
    emit(&report.render(format), args.out.as_ref())?;
    Ok(report.exit_code())
}

fn main() -> ExitCode {
    let args = Args::parse();
    match main_inner(&args) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("pq: {e}");
            ExitCode::from(cli::exit_code_for(&e) as u8)
        }
    }
}
