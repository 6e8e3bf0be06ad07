use std::process::ExitCode;

use antizeno_cli::args::Args;
use antizeno_cli::{execute, CliError};
use clap::Parser;

fn main() -> ExitCode {
    let args = Args::parse();
    match args.resolve().and_then(|c| execute(&c)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(CliError::exit_code(&e) as u8)
        }
    }
}
