//! Library side of the `couette` binary: commands, emitters and config.

pub mod commands;
pub mod config;
pub mod emit;
pub mod error;
pub mod grid;

pub use error::{CliError, Result};
