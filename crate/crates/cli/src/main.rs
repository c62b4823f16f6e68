use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use h2export_cli::cluster::cmd_cluster;
use h2export_cli::config::LoadedConfig;
use h2export_cli::pool::default_jobs;
use h2export_cli::report::cmd_report;
use h2export_cli::run::cmd_run;
use h2export_cli::sensitivity::cmd_sensitivity;
use h2export_cli::CliError;

/// Hydrogen export cost-potential analysis.
#[derive(Parser)]
#[command(name = "h2export", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Cluster renewable placements and cache the result per country.
    Cluster {
        #[arg(long)]
        config: PathBuf,
    },
    /// Solve every country, year and export level.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Worker threads; defaults to the available parallelism.
        #[arg(long, env = "H2EXPORT_JOBS")]
        jobs: Option<usize>,
    },
    /// Solve the reference case and its one-at-a-time variants.
    Sensitivity {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, env = "H2EXPORT_JOBS")]
        jobs: Option<usize>,
    },
    /// Build tables from a results directory.
    Report {
        #[arg(long)]
        results: PathBuf,
        /// Defaults to `<results>/report`.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn dispatch(cmd: Command) -> Result<(), CliError> {
    match cmd {
        Command::Cluster { config } => {
            let cfg = LoadedConfig::load(&config)?;
            for g in cmd_cluster(&cfg)? {
                println!("{g}");
            }
        }
        Command::Run { config, jobs } => {
            let cfg = LoadedConfig::load(&config)?;
            let r = cmd_run(&cfg, jobs.unwrap_or_else(default_jobs))?;
            println!(
                "{} solved, {} unchanged, {} not optimal; results in {}",
                r.solved,
                r.skipped,
                r.failed,
                r.results_dir.display()
            );
        }
        Command::Sensitivity { config, jobs } => {
            let cfg = LoadedConfig::load(&config)?;
            for p in cmd_sensitivity(&cfg, jobs.unwrap_or_else(default_jobs))? {
                println!("{}", p.display());
            }
        }
        Command::Report { results, out } => {
            let out = out.unwrap_or_else(|| results.join("report"));
            let names = cmd_report(&results, &out)?;
            println!("{} files in {}", names.len(), out.display());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
