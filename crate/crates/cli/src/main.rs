use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use cfrisk_cli::config::{layered_settings, Format, RunConfig};
use cfrisk_cli::report::{write_csv, write_json, Report};
use cfrisk_cli::{presets, runner, CliError};
use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(name = "cfrisk", version, about = "VaR and CVaR by Fourier inversion of characteristic functions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate every (alpha, algorithm) cell once
    Run(RunArgs),
    /// Evaluate over the grid sweep.param = from..to in sweep.steps points
    Sweep(RunArgs),
    /// Repeat every cell bench.repeats times and keep the best wall time
    Bench(RunArgs),
    /// List presets, or print one as an editable config file
    Presets { name: Option<String> },
}

#[derive(Args)]
struct RunArgs {
    /// Preset to start from (see `cfrisk presets`)
    preset: Option<String>,
    /// key = value config file, applied over the preset
    #[arg(long)]
    config: Option<PathBuf>,
    /// Override one key, e.g. --set model.sigma=0.3 (repeatable)
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
    /// Output file (stdout if omitted)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Write JSON instead of CSV
    #[arg(long)]
    json: bool,
    /// Worker threads for sweeps
    #[arg(long)]
    jobs: Option<usize>,
    /// Seed for the Monte Carlo oracle
    #[arg(long)]
    seed: Option<u64>,
}

fn load(args: &RunArgs) -> Result<RunConfig, CliError> {
    let text = match &args.config {
        Some(p) => Some(fs::read_to_string(p).map_err(|e| CliError::ConfigInvalid(format!("{}: {e}", p.display())))?),
        None => None,
    };
    let mut overrides = args.set.clone();
    if let Some(j) = args.jobs {
        overrides.push(format!("jobs={j}"));
    }
    if let Some(s) = args.seed {
        overrides.push(format!("seed={s}"));
    }
    if args.json {
        overrides.push("output.format=json".into());
    }
    if let Some(p) = &args.out {
        overrides.push(format!("output.path={}", p.display()));
    }
    let settings = layered_settings(args.preset.as_deref(), text.as_deref(), &overrides)?;
    RunConfig::from_settings(&settings)
}

fn emit(cfg: &RunConfig, report: &Report) -> Result<(), CliError> {
    let mut buf = Vec::new();
    match cfg.format {
        Format::Csv => write_csv(&report.rows, &mut buf)?,
        Format::Json => write_json(report, &mut buf)?,
    }
    match &cfg.out {
        Some(p) => fs::write(p, buf)?,
        None => io::stdout().write_all(&buf)?,
    }
    Ok(())
}

type Verb = fn(&RunConfig) -> Result<Report, CliError>;

fn execute(cli: Cli) -> Result<(), CliError> {
    let (args, verb): (RunArgs, Verb) = match cli.command {
        Command::Presets { name: None } => {
            for p in presets::PRESETS {
                println!("{:<16} {}", p.name, p.description);
            }
            return Ok(());
        }
        Command::Presets { name: Some(n) } => {
            let p = presets::find(&n).ok_or_else(|| CliError::ConfigInvalid(format!("unknown preset '{n}'")))?;
            print!("{}", p.text);
            return Ok(());
        }
        Command::Run(a) => (a, runner::run),
        Command::Sweep(a) => (a, runner::sweep),
        Command::Bench(a) => (a, runner::bench),
    };
    let cfg = load(&args)?;
    let report = verb(&cfg)?;
    emit(&cfg, &report)
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", e.report());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
