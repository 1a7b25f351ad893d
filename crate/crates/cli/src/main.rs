use std::process::ExitCode;

use clap::Parser;
use qufti_cli::{run, Cli};

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("qufti: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
