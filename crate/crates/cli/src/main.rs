mod args;
mod commands;
mod config;
mod error;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};
use error::{usage, Result};

fn run(cli: Cli) -> Result<()> {
    let quiet = cli.quiet;
    let command = cli.command;
    let execute = move || match command {
        Command::TestOne(a) => commands::test_one(a),
        Command::TestTwo(a) => commands::test_two(a),
        Command::Simulate(a) => commands::simulate(a, quiet),
        Command::Pairwise(a) => commands::pairwise(a),
        Command::Oracle(a) => commands::oracle(a),
    };
    match cli.threads {
        None => execute(),
        Some(0) => Err(usage("--threads must be at least 1")),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()?
            .install(execute),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::FAILURE
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("gsign: error: {e}");
            ExitCode::FAILURE
        }
    }
}
