//! Library side of the `qbm-ring` command-line tool: configuration,
//! subcommands and output formatting. The binary is a thin wrapper, so the
//! same functions can be driven from tests.

pub mod commands;
pub mod config;
pub mod error;
pub mod output;

pub use commands::{cmd_amplitude, cmd_gfun, cmd_oracle, cmd_params, cmd_wexp, OracleOptions, OracleReport, WMode};
pub use config::{Format, Overrides, Resolved, RunConfig};
pub use error::CliError;
pub use output::Table;
