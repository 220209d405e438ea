//! File formats, the conjecture search runner and the `oblique` command line
//! on top of `oblique-core`.

pub mod cli;
pub mod config;
pub mod error;
pub mod formats;
pub mod search;

pub use error::CliError;
