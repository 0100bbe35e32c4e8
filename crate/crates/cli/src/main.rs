mod commands;
mod config;
mod error;
mod output;

use std::io::Write;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

use config::Cli;
use error::CliError;

const THREADS_VAR: &str = "SQUEEZELAB_THREADS";

fn init_threads() -> Result<(), CliError> {
    let Ok(text) = std::env::var(THREADS_VAR) else {
        return Ok(());
    };
    let threads: usize = text
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::ConfigParse(format!("{THREADS_VAR} must be a positive integer, got '{text}'")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| CliError::Io(e.to_string()))
}

fn execute(cli: &Cli) -> Result<(), CliError> {
    init_threads()?;
    let report = commands::run(&cli.command)?;
    let bytes = output::render(report.format, &report.meta, &report.table)?;
    match &report.out {
        Some(path) => std::fs::write(path, &bytes)
            .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))?,
        None => std::io::stdout().lock().write_all(&bytes)?,
    }
    match report.failure {
        Some(message) => Err(CliError::ValidationFailed(message)),
        None => Ok(()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let err = CliError::ConfigParse(e.render().to_string().trim().to_string());
            eprintln!("{}", err.to_json());
            return ExitCode::from(err.exit_code());
        }
    };
    match execute(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("{}", err.to_json());
            ExitCode::from(err.exit_code())
        }
    }
}
