//! File formats, command implementations and run logs for the `edist`
//! command-line tool. All mathematics lives in `edist-core`.

pub mod commands;
pub mod format;
pub mod runlog;

pub use format::{parse_and_load, FormatError, InstanceFile, Loaded};
