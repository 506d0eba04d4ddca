use std::process::ExitCode;

use clap::Parser;
use lesionbench::cli::{run, Cli};
use lesionbench::Error;

fn main() -> ExitCode {
    // Clap handles usage errors itself with exit code 2.
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e @ Error::Config(_)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
