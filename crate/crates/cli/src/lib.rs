//! Command-line front end for the `dimp8` solver: graph file I/O, result
//! records and the subcommands.

pub mod commands;
pub mod format;
pub mod record;

pub use commands::{run, Cli, Output};
pub use format::{parse_graph, parse_matching, write_graph, write_matching, ParseError};
pub use record::{DiagnosticsRecord, ResultRecord, WeightField};
