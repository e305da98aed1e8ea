use std::io;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Result;
use clap::{Parser, Subcommand};
use skorokhod_cli::{Format, Scenario, ScenarioConfig, DEFAULT_SEED};

/// Skorokhod distances, embeddings and tightness experiments.
///
/// Exit status: 0 when every assertion holds, 2 when one fails, 1 on
/// usage or input errors.
#[derive(Debug, Parser)]
#[command(name = "skorokhod", version)]
struct Cli {
    /// Root seed for all random streams.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output directory; tables go to stdout when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    #[command(flatten)]
    Scenario(Scenario),
    /// Run a scenario described by a TOML configuration file.
    Run {
        #[arg(long)]
        config: PathBuf,
    },
}

fn execute(cli: Cli) -> Result<bool> {
    let (scenario, seed, out, format) = match cli.command {
        Command::Scenario(s) => (s, cli.seed, cli.out, cli.format),
        Command::Run { config } => {
            let c = ScenarioConfig::load(&config)?;
            let s = Scenario::from_config(&c)?;
            (s, cli.seed.or(c.seed), cli.out.or(c.out), cli.format.or(c.format))
        }
    };
    scenario.validate()?;
    let format = format.unwrap_or_default();
    let report = scenario.run(seed.unwrap_or(DEFAULT_SEED))?;
    match out {
        Some(dir) => report.write_dir(&dir, format)?,
        None => report.write_stream(&mut io::stdout().lock(), format)?,
    }
    for a in &report.assertions {
        eprintln!("{} {}: {}", if a.passed { "PASS" } else { "FAIL" }, a.name, a.detail);
    }
    Ok(report.passed())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match execute(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
