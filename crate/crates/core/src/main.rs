use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use proxistat::config::load_config;
use proxistat::pipeline::{self, StageSummary};
use proxistat::Result;

/// Factor analysis, scale reliability, and regression pipeline for
/// occupation score tables.
#[derive(Parser)]
#[command(name = "proxistat", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct StageArgs {
    /// Path to the TOML configuration file.
    #[arg(long)]
    config: PathBuf,
    /// Output directory (overrides the configured one).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Run every stage in order and write the audit log.
    Run(StageArgs),
    /// Load and validate the input table.
    Ingest(StageArgs),
    /// Extract factors and prune weak or cross-loading items.
    Efa(StageArgs),
    /// Build scales and gate their reliabilities.
    Scales(StageArgs),
    /// Compute descriptive statistics and scale correlations.
    Correlate(StageArgs),
    /// Fit simple and combined regressions and check hypotheses.
    Regress(StageArgs),
    /// Classify occupations into the low-low and high-high boxes.
    Quadrants(StageArgs),
}

impl Command {
    fn stage_args(&self) -> &StageArgs {
        match self {
            Command::Run(a)
            | Command::Ingest(a)
            | Command::Efa(a)
            | Command::Scales(a)
            | Command::Correlate(a)
            | Command::Regress(a)
            | Command::Quadrants(a) => a,
        }
    }
}

fn execute(command: &Command) -> Result<Vec<StageSummary>> {
    let args = command.stage_args();
    let cfg = load_config(&args.config, args.out.as_deref())?;
    match command {
        Command::Run(_) => pipeline::run_pipeline(&cfg),
        Command::Ingest(_) => pipeline::stage_ingest(&cfg).map(|s| vec![s]),
        Command::Efa(_) => pipeline::stage_efa(&cfg).map(|s| vec![s]),
        Command::Scales(_) => pipeline::stage_scales(&cfg).map(|s| vec![s]),
        Command::Correlate(_) => pipeline::stage_correlate(&cfg).map(|s| vec![s]),
        Command::Regress(_) => pipeline::stage_regress(&cfg).map(|s| vec![s]),
        Command::Quadrants(_) => pipeline::stage_quadrants(&cfg).map(|s| vec![s]),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match execute(&cli.command) {
        Ok(summaries) => {
            for summary in &summaries {
                for line in &summary.lines {
                    eprintln!("[{}] {}", summary.name, line);
                }
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_validation() { 1 } else { 2 })
        }
    }
}
