//! Command-line front end: dataset ingest, bundled fixtures, subcommands
//! and report rendering.

pub mod args;
pub mod commands;
pub mod dataset;
pub mod error;
pub mod fixtures;
pub mod report;

use clap::Parser;

pub use args::Cli;
pub use error::{CliError, CliResult};
pub use report::{Format, RunReport};

/// Parses `argv` (program name first) and runs it, returning the rendered
/// report.
pub fn run_args<I, T>(argv: I) -> CliResult<String>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let argv: Vec<std::ffi::OsString> = argv.into_iter().map(Into::into).collect();
    let cli = Cli::try_parse_from(&argv).map_err(|e| CliError::Input(e.to_string()))?;
    let echo = argv
        .iter()
        .skip(1)
        .map(|a| a.to_string_lossy().into_owned())
        .collect::<Vec<_>>()
        .join(" ");
    let report = commands::run(&cli.command, &echo)?;
    report.render(cli.format)
}
