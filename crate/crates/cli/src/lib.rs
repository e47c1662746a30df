//! Command-line front end: instance documents, commands and reports.

pub mod commands;
pub mod document;
pub mod error;
pub mod report;

pub use commands::{cmd_restructure, cmd_solve, cmd_trajectory, Overrides};
pub use document::{parse_document, InstanceDocument, Kind};
pub use error::CliError;
pub use report::RunReport;

/// Read and parse an instance file.
pub fn load(path: &std::path::Path) -> Result<InstanceDocument, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Io { path: path.display().to_string(), message: e.to_string() })?;
    parse_document(&text)
}
