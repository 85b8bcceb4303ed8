use std::process::ExitCode;

use clap::Parser;

use slitmodes_cli::commands::{self, Cli, CliError};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(CliError::Usage(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
        Err(CliError::Output(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(3)
        }
    }
}
