//! Command-line front end for `dunkl-core`: configuration, text and CSV/JSON
//! formats, and the acceptance checks run by `verify-all`.

pub mod cli;
pub mod commands;
pub mod config;
pub mod error;
pub mod gspec;
pub mod report;
pub mod sampling;
pub mod system;
pub mod text;
pub mod verify;

pub use error::{CliError, CliResult};
