use std::process::ExitCode;

use clap::Parser;
use graphon_psi_cli::args::Cli;
use graphon_psi_cli::{exit_code, run};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e) as u8)
        }
    }
}
