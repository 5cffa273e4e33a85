use std::process::ExitCode;

use clap::Parser;
use timeobs::{run, Cli};

fn main() -> ExitCode {
    let result = Cli::parse().into_config().and_then(|c| run(&c));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", e.record());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
