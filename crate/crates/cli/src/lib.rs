//! Instance parsing, experiment orchestration and report emission for the
//! `navol` command-line tool.

pub mod commands;
pub mod error;
pub mod instance;
pub mod output;

pub use commands::{run, verify_all, Command, Options};
pub use error::CliError;
pub use instance::{parse_instance, Instance, InstanceFile};
pub use output::Outcome;
