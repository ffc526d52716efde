//! Command-line front end: symmetry reports, third-order reduction, trajectory
//! integration and residual sweeps.

pub mod commands;
pub mod config;
pub mod error;
pub mod report;

pub use commands::{
    reduce3, run, run_analyze, run_command, run_integrate, run_reduce3, run_residual_sweep,
    Artifact,
};
pub use config::{
    AnalyzeConfig, Binding, Cli, IntegrateConfig, OutputFormat, Reduce3Config, RunConfig,
    SweepConfig,
};
pub use error::{CliError, Exit};
pub use report::{AnalysisReport, SCHEMA};
