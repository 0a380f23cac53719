//! Configuration, dispatch and reporting for the `fueter` command.

pub mod app;
mod checks;
mod config;
mod convergence;
mod error;
pub mod spec;
mod suite;

pub use checks::{interior_samples, run_check, DEFAULT_SEED, FLOOR_RTOL};
pub use config::{Check, RunConfig};
pub use convergence::{run_convergence, ConvergenceRow, ConvergenceTable};
pub use error::{CliError, CliResult, EXIT_FAIL, EXIT_NUMERICAL, EXIT_PASS, EXIT_USAGE};
pub use suite::{parse_suite, run_suite, run_suite_configs, SuiteEntry, SuiteSummary};
