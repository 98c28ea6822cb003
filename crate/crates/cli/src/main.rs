// `!(x > 0.0)` guards are used on purpose so that NaN inputs are rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod args;
mod commands;
mod error;
mod output;

use std::io::Write;
use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;

use crate::args::Cli;
use crate::error::CliError;
use crate::output::{sidecar_path, write_atomic};

const THREADS_VAR: &str = "FERMIONFLOW_THREADS";

fn configure_threads() -> Result<(), CliError> {
    let Ok(value) = std::env::var(THREADS_VAR) else {
        return Ok(());
    };
    let threads: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Config(format!("{THREADS_VAR} must be a positive integer, got '{value}'")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| CliError::Io(format!("cannot start the thread pool: {e}")))
}

fn run(cli: &Cli) -> Result<(), CliError> {
    configure_threads()?;
    let start = Instant::now();
    let artifact = commands::run(cli)?;
    let csv = artifact.render_csv();
    match &cli.out {
        Some(path) => {
            write_atomic(path, csv.as_bytes())?;
            let sidecar = artifact.sidecar(path, start.elapsed().as_secs_f64());
            let mut json = serde_json::to_string_pretty(&sidecar).expect("sidecar serialises");
            json.push('\n');
            write_atomic(&sidecar_path(path), json.as_bytes())?;
            if !artifact.summary.is_empty() {
                println!("{}", serde_json::to_string_pretty(&artifact.summary).expect("summary serialises"));
            }
        }
        None => std::io::stdout().write_all(csv.as_bytes())?,
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("fermionflow: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
