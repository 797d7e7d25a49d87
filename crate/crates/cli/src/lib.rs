//! Command-line front end for `bklr-core`: JSON configuration, the text
//! syntax for diagram words, deterministic reports and the verification
//! suites.

pub mod commands;
pub mod config;
pub mod error;
pub mod parse;
pub mod report;
pub mod suites;

pub use commands::{run, run_with, Cli, Command};
pub use config::Config;
pub use error::{CliError, Result};
pub use report::Report;
