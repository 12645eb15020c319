//! Command-line front end: configuration parsing and the `limsim`
//! subcommands.

pub mod cli;
pub mod commands;
pub mod config;

pub use cli::{run, Cli, Command};
pub use config::{Config, ConfigError};
