//! Library side of the `quadtrace` command-line tool.

pub mod args;
pub mod commands;
pub mod error;
pub mod functions;
pub mod paired;
pub mod report;

pub use error::{CliError, Result};
