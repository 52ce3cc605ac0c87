//! Library half of the `tqc` binary: config parsing, result tables, plots
//! and experiment dispatch.

pub mod config;
pub mod error;
pub mod run;
pub mod svg;
pub mod table;

pub use config::{parse_config, Kind, RunConfig};
pub use error::CliError;
pub use run::{execute, Output};
pub use table::ResultTable;
