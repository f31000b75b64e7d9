//! Command-line front end for the multimode OPA simulator: configuration
//! parsing, subcommand dispatch, and CSV/JSON plot-data serialization.

pub mod commands;
pub mod config;
pub mod driver;
pub mod output;

pub use commands::run_cli;
