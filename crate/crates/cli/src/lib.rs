//! `psix` command-line front end: one subcommand per library operation,
//! records written as CSV or JSON.

mod commands;
pub mod config;
pub mod emit;

use std::fs::File;
use std::io::{self, BufWriter, Write};

use thiserror::Error;

pub use config::{Command, Format, RunConfig};

pub const EXIT_OK: u8 = 0;
/// A verification subcommand found a counterexample.
pub const EXIT_COUNTEREXAMPLE: u8 = 1;
/// Usage, domain or I/O error.
pub const EXIT_ERROR: u8 = 2;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] psix_core::Error),
    #[error("{0}")]
    Usage(String),
    #[error("cannot open output {path}: {source}")]
    Output { path: String, source: io::Error },
    #[error("write failed: {0}")]
    Io(#[from] io::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("thread pool: {0}")]
    Pool(#[from] rayon::ThreadPoolBuildError),
}

/// Whether a run's verification found a counterexample.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Clean,
    Counterexample,
}

fn open_sink(config: &RunConfig) -> Result<Box<dyn Write + Send>, CliError> {
    Ok(match &config.output {
        Some(path) => Box::new(BufWriter::new(File::create(path).map_err(|source| {
            CliError::Output {
                path: path.display().to_string(),
                source,
            }
        })?)),
        None => Box::new(BufWriter::new(io::stdout())),
    })
}

/// Execute one invocation and return the process exit code.
pub fn run(config: &RunConfig) -> u8 {
    let result = (|| {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(config.threads)
            .build()?;
        let mut sink = open_sink(config)?;
        let verdict =
            pool.install(|| commands::execute(&config.command, config.format, &mut sink))?;
        sink.flush()?;
        Ok::<_, CliError>(verdict)
    })();
    match result {
        Ok(Verdict::Clean) => EXIT_OK,
        Ok(Verdict::Counterexample) => EXIT_COUNTEREXAMPLE,
        Err(e) => {
            eprintln!("psix: {e}");
            EXIT_ERROR
        }
    }
}
