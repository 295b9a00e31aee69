//! Command-line lab around [`ustlab_core`]: graph files, sharded execution,
//! deterministic JSON/CSV reports and brute-force oracles.

pub mod cli;
pub mod commands;
pub mod config;
pub mod error;
pub mod io;
pub mod oracle;
pub mod parallel;
pub mod report;

pub const TOOL_NAME: &str = "ustlab";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
