use std::process::ExitCode;

use clap::Parser;
use semfid_cli::{run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("semfid: {e}");
            ExitCode::FAILURE
        }
    }
}
