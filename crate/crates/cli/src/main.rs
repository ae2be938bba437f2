#![allow(clippy::result_large_err)]

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use cake_cli::{
    builtin_counterexample, parse_scenario, run_scenario, Check, ProcedureSpec, Scenario,
};
use clap::{Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(
    name = "cakecut",
    version,
    about = "Exact cake-cutting procedures and audits"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario file.
    Run {
        file: PathBuf,
        /// Replace the scenario's procedures with this one.
        #[arg(long)]
        procedure: Option<String>,
        /// Replace the scenario's checks (comma separated).
        #[arg(long, value_delimiter = ',')]
        check: Option<Vec<String>>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Run a built-in counterexample.
    Counterexample {
        id: u32,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        /// Print the scenario document instead of running it.
        #[arg(long)]
        scenario: bool,
    },
    /// Parse and validate a scenario file.
    Validate { file: PathBuf },
}

fn load(path: &PathBuf) -> Result<Scenario> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    parse_scenario(&text).with_context(|| format!("invalid scenario {}", path.display()))
}

fn emit(s: &Scenario, format: Format) {
    let report = run_scenario(s);
    match format {
        Format::Text => print!("{}", report.to_text()),
        Format::Json => print!("{}", report.to_json()),
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Run {
            file,
            procedure,
            check,
            format,
        } => {
            let mut s = load(&file)?;
            if let Some(p) = procedure {
                s.procedures = vec![ProcedureSpec::from_name(&p)?];
            }
            if let Some(cs) = check {
                s.checks = cs
                    .iter()
                    .filter(|c| !c.is_empty())
                    .map(|c| Check::from_name(c))
                    .collect::<Result<_, _>>()?;
            }
            s.validate()?;
            emit(&s, format);
        }
        Command::Counterexample {
            id,
            format,
            scenario,
        } => {
            let s = builtin_counterexample(id)?;
            if scenario {
                print!("{}", s.to_json());
            } else {
                emit(&s, format);
            }
        }
        Command::Validate { file } => {
            let s = load(&file)?;
            println!(
                "ok: {} ({} players, {} procedures, {} checks)",
                s.name,
                s.players.len(),
                s.procedures.len(),
                s.checks.len()
            );
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
