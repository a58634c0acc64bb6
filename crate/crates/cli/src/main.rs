mod args;
mod bench;
mod check;
mod commands;
mod error;
mod oracle;

use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

use args::{Cli, Command};
use error::CliError;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    print!("{e}");
                    ExitCode::SUCCESS
                }
                ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => {
                    eprintln!("{}", CliError::new("usage", "missing subcommand; try --help"));
                    ExitCode::from(2)
                }
                _ => {
                    let text = e.to_string();
                    let first = text.lines().next().unwrap_or("invalid arguments");
                    eprintln!("{}", CliError::new("usage", first.trim_start_matches("error: ")));
                    ExitCode::from(2)
                }
            };
        }
    };
    let outcome = match &cli.command {
        Command::Evaluate(a) => commands::evaluate(a),
        Command::Estimate(a) => commands::estimate(a),
        Command::Solve(a) => commands::solve(a),
        Command::Check(a) => check::check(a),
        Command::Bench(a) => bench::bench(a),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{e}");
            ExitCode::FAILURE
        }
    }
}
