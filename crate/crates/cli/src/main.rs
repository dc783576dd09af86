// `!(x > 0)` style guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod config;
mod error;
mod output;

use std::process::ExitCode;

use clap::Parser;

use crate::config::{Args, RunConfig};
use crate::error::CliError;

/// Environment variable capping the worker count; 0 or unset means one
/// worker per core.
const THREADS_ENV: &str = "PAPR_VLC_THREADS";

fn configure_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let threads: usize = raw
        .trim()
        .parse()
        .map_err(|e| CliError::Config(format!("{THREADS_ENV}=`{raw}`: {e}")))?;
    if threads > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|e| CliError::Runtime(e.to_string()))?;
    }
    Ok(())
}

fn run() -> Result<(), CliError> {
    let args = Args::try_parse().map_err(|e| {
        use clap::error::ErrorKind;
        if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
            // help and version are not failures
            let _ = e.print();
            std::process::exit(0);
        }
        CliError::Config(e.to_string().trim_end().to_string())
    })?;
    configure_threads()?;
    let cfg = RunConfig::resolve(&args)?;
    let outcome = commands::run(&cfg)?;
    output::write_output(&cfg.output_path, &outcome.table.render(cfg.format))?;
    outcome.failure.map_or(Ok(()), Err)
}

fn main() -> ExitCode {
    match run() {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("vlc-papr: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
