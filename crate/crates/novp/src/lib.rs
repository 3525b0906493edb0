//! File formats, randomized harnesses and the command dispatcher behind the
//! `novp` binary.

pub mod cli;
pub mod error;
pub mod harness;
pub mod models;
pub mod random;
pub mod schema;
pub mod text;

pub use error::{CliError, CliResult};
pub use novp_core;
