//! Command-line harness around `finite_sampling`: JSON design
//! configurations, verification sweeps, the cyclic and dihedral scenarios,
//! and machine-readable reports.

pub mod commands;
pub mod config;
pub mod demos;
pub mod error;
pub mod pipeline;
pub mod report;
pub mod verify;

pub use config::DesignConfig;
pub use error::{CliError, ExitStatus, Stage};
pub use pipeline::Pipeline;
pub use verify::{run_verify, VerifyOptions, VerifyReport};
