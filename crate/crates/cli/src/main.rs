//! `ocolt`: simulate online optimization with perturbed long-term constraints.

mod commands;
mod config;
mod output;

use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};

use crate::commands::{cmd_run, cmd_sweep, cmd_verify, Status};
use crate::config::{parse_epsilons, ConfigArgs};

#[derive(Debug, Parser)]
#[command(name = "ocolt", version, about = "Online convex optimization with perturbed long-term constraints")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run one configuration and write trace.csv, summary.json and plot.dat.
    Run(ConfigArgs),
    /// One run per epsilon over the same stream seed, plus sweep.csv.
    Sweep {
        #[command(flatten)]
        config: ConfigArgs,
        /// Comma-separated rates in [0, 1), e.g. 0,0.25,0.5,0.75.
        #[arg(long)]
        epsilons: String,
    },
    /// Numerical self-checks; exit 0 iff all pass.
    Verify,
}

fn dispatch(cli: Cli) -> anyhow::Result<Status> {
    match cli.command {
        Command::Run(args) => cmd_run(&args.resolve()?),
        Command::Sweep { config, epsilons } => {
            let list = parse_epsilons(&epsilons)?;
            cmd_sweep(&config.resolve()?, &list)
        }
        Command::Verify => cmd_verify(),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(Status::Error as u8),
            };
        }
    };
    match dispatch(cli) {
        Ok(status) => ExitCode::from(status as u8),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(Status::Error as u8)
        }
    }
}
