//! Presentation files and the `lpres` command line.

pub mod commands;
pub mod error;
pub mod format;
pub mod json;
pub mod parse;

pub use commands::{run_command, Cli, Output};
pub use error::CliError;
pub use format::{format_file, format_presentation};
pub use parse::{parse_presentation, parse_word, NamedSubgroup, PresentationFile};
