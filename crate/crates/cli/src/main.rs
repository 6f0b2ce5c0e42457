use std::process::ExitCode;

use clap::Parser;

fn main() -> ExitCode {
    let cli = ollga_cli::Cli::parse();
    match ollga_cli::execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
