//! Command-line interface and HTTP service for lyricmood.

pub mod args;
pub mod commands;
pub mod config;
pub mod error;
pub mod output;
pub mod predict;
pub mod service;

pub use args::Cli;
pub use commands::run;
pub use error::{exit_code, UsageError};
