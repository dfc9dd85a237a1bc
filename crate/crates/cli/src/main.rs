use std::process::ExitCode;

use clap::Parser;

fn main() -> ExitCode {
    let config = psix_cli::RunConfig::parse();
    ExitCode::from(psix_cli::run(&config))
}
