//! Append-only JSON-lines run log.

use std::fs::OpenOptions;
use std::io::{self, Write};
use std::path::Path;

use serde::Serialize;
use serde_json::Value;

#[derive(Debug, Clone, Serialize)]
pub struct RunRecord {
    pub command: String,
    pub arguments: Vec<String>,
    pub instance_hash: Option<String>,
    pub exit_code: i32,
    pub report: Value,
    pub wall_time_ms: f64,
    pub version: &'static str,
}

impl RunRecord {
    pub fn new(command: &str, arguments: Vec<String>) -> Self {
        Self {
            command: command.to_string(),
            arguments,
            instance_hash: None,
            exit_code: 0,
            report: Value::Null,
            wall_time_ms: 0.0,
            version: env!("CARGO_PKG_VERSION"),
        }
    }
}

/// Appends one record as a single line.
pub fn append(path: &Path, record: &RunRecord) -> io::Result<()> {
    let mut line = serde_json::to_string(record)?;
    line.push('\n');
    let mut f = OpenOptions::new().create(true).append(true).open(path)?;
    f.write_all(line.as_bytes())
}
