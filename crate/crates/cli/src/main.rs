//! `deepthought` runs corruption experiments and exports their results.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use deepthought_sim::config::load_configs;
use deepthought_sim::records::{from_records, parse_log, replay, to_ndjson};
use deepthought_sim::report::{compare, csv_string, json_string, plot_rows, render_table, sweep, ResultRow};
use deepthought_sim::{run_experiment, ExperimentConfig, Protocol, SimError};

#[derive(Parser)]
#[command(name = "deepthought", version, about = "Corruption-resistance experiments for a reputation-weighted voting oracle")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one config (or every config of a matrix) and write its record log.
    Run(RunArgs),
    /// Run each config under both protocols and write paired rows plus plot data.
    Compare(RunArgs),
    /// Re-run one config over an alpha/beta grid.
    Sweep(SweepArgs),
    /// Re-execute a record log from its header and check it line by line.
    Replay(LogArgs),
    /// Rebuild the result row of a record log without re-running it.
    Report(LogArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
    Table,
}

#[derive(Args)]
struct Common {
    /// Output directory. Nothing is written when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "table")]
    format: Format,
    /// Worker threads for repetitions. Defaults to one per core.
    #[arg(long)]
    jobs: Option<usize>,
}

#[derive(Args)]
struct RunArgs {
    /// Config file or matrix file (TOML or JSON).
    #[arg(long)]
    config: PathBuf,
    /// Replaces the seed of every loaded config.
    #[arg(long)]
    seed: Option<u64>,
    /// Replaces the protocol of every loaded config. Ignored by `compare`.
    #[arg(long)]
    protocol: Option<String>,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    run: RunArgs,
    /// Comma-separated alpha values.
    #[arg(long, value_delimiter = ',', default_values_t = [0.0, 0.25, 0.5, 0.75, 1.0])]
    alphas: Vec<f64>,
    /// Comma-separated beta values.
    #[arg(long, value_delimiter = ',', default_values_t = [0.0, 0.25, 0.5, 0.75, 1.0])]
    betas: Vec<f64>,
}

#[derive(Args)]
struct LogArgs {
    /// Record log written by `run`.
    #[arg(long)]
    log: PathBuf,
    #[command(flatten)]
    common: Common,
}

fn main() -> ExitCode {
    match execute(Cli::parse().command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                SimError::ConfigInvalid(_) | SimError::Io { .. } => ExitCode::from(2),
                SimError::MismatchDetected { .. } => ExitCode::from(3),
                _ => ExitCode::FAILURE,
            }
        }
    }
}

fn load(args: &RunArgs) -> Result<Vec<ExperimentConfig>, SimError> {
    let protocol = args.protocol.as_deref().map(str::parse::<Protocol>).transpose()?;
    let mut configs = load_configs(&args.config)?;
    for c in &mut configs {
        if let Some(seed) = args.seed {
            c.seed = seed;
        }
        if let Some(p) = protocol {
            c.protocol = p;
        }
        c.validate()?;
    }
    Ok(configs)
}

fn render(rows: &[ResultRow], format: Format) -> Result<String, SimError> {
    Ok(match format {
        Format::Csv => csv_string(rows)?,
        Format::Json => json_string(rows),
        Format::Table => render_table(rows),
    })
}

/// Writes every file at once, after all computation is done.
fn write_all(dir: &Path, files: &[(String, String)]) -> Result<(), SimError> {
    let io = |path: &Path| {
        let path = path.display().to_string();
        move |source| SimError::Io { path, source }
    };
    fs::create_dir_all(dir).map_err(io(dir))?;
    for (name, body) in files {
        let path = dir.join(name);
        fs::write(&path, body).map_err(io(&path))?;
    }
    Ok(())
}

fn file_stem(c: &ExperimentConfig) -> String {
    let id = if c.id.is_empty() { "run" } else { &c.id };
    format!("{id}-{}", c.protocol)
}

fn read_log(path: &Path) -> Result<String, SimError> {
    fs::read_to_string(path).map_err(|source| SimError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn execute(command: Command) -> Result<(), SimError> {
    match command {
        Command::Run(args) => {
            let configs = load(&args)?;
            let mut rows = Vec::new();
            let mut files = Vec::new();
            for c in &configs {
                let result = run_experiment(c, args.common.jobs)?;
                let row = ResultRow::from(&result);
                let stem = file_stem(c);
                files.push((format!("{stem}.ndjson"), to_ndjson(&result)));
                files.push((format!("{stem}.metrics.json"), json_string(std::slice::from_ref(&row))));
                rows.push(row);
            }
            files.push(("results.csv".into(), csv_string(&rows)?));
            if let Some(dir) = &args.common.out {
                write_all(dir, &files)?;
            }
            print!("{}", render(&rows, args.common.format)?);
        }
        Command::Compare(args) => {
            let configs = load(&args)?;
            let rows = compare(&configs, args.common.jobs)?;
            if let Some(dir) = &args.common.out {
                write_all(
                    dir,
                    &[
                        ("compare.csv".into(), csv_string(&rows)?),
                        ("plot.csv".into(), csv_string(&plot_rows(&rows))?),
                    ],
                )?;
            }
            print!("{}", render(&rows, args.common.format)?);
        }
        Command::Sweep(args) => {
            let configs = load(&args.run)?;
            let mut rows = Vec::new();
            for c in &configs {
                rows.extend(sweep(c, &args.alphas, &args.betas, args.run.common.jobs)?);
            }
            let csv = csv_string(&rows)?;
            if let Some(dir) = &args.run.common.out {
                write_all(dir, &[("sweep.csv".into(), csv.clone())])?;
            }
            match args.run.common.format {
                Format::Json => print!("{}", json_string(&rows)),
                _ => print!("{csv}"),
            }
        }
        Command::Replay(args) => {
            let lines = replay(&read_log(&args.log)?, args.common.jobs)?;
            println!("match: {lines} records reproduced from {}", args.log.display());
        }
        Command::Report(args) => {
            let result = from_records(&parse_log(&read_log(&args.log)?)?)?;
            let rows = [ResultRow::from(&result)];
            if let Some(dir) = &args.common.out {
                write_all(dir, &[(format!("{}.metrics.json", file_stem(&result.config)), json_string(&rows))])?;
            }
            print!("{}", render(&rows, args.common.format)?);
        }
    }
    Ok(())
}
