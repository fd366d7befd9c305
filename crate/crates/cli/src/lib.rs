//! Command-line front end: JSON documents and the `katz` subcommands.

pub mod commands;
pub mod doc;
