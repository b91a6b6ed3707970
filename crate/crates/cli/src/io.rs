//! File I/O and the report envelope.

use std::fs;
use std::path::Path;

use jbtriple::AnyElement;
use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::error::{CliError, CliResult};

pub const TOOL: &str = "jbt";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub fn read_json<T: DeserializeOwned>(path: &Path) -> CliResult<T> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Read { path: path.into(), source })?;
    serde_json::from_str(&text).map_err(|source| CliError::Parse { path: path.into(), source })
}

/// An element file: a single element or a `{"parts": [...]}` sum.
pub fn read_element(path: &Path) -> CliResult<AnyElement> {
    read_json(path)
}

pub fn write_file(path: &Path, text: &str) -> CliResult<()> {
    fs::write(path, text).map_err(|source| CliError::Write { path: path.into(), source })
}

/// Top-level report: tool name and version first, then the command payload.
#[derive(Debug, Serialize)]
pub struct Envelope<'a, T: Serialize> {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: &'a str,
    #[serde(flatten)]
    pub body: T,
}

/// Pretty JSON with a trailing newline; key order follows struct declarations.
pub fn render<T: Serialize>(command: &str, body: T) -> CliResult<String> {
    let mut s = serde_json::to_string_pretty(&Envelope { tool: TOOL, version: VERSION, command, body })?;
    s.push('\n');
    Ok(s)
}
