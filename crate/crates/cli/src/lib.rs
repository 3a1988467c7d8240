//! Library side of the `dipchain` command: configuration, the subcommands
//! and the table format they write.

pub mod commands;
pub mod config;
pub mod error;
pub mod table;
