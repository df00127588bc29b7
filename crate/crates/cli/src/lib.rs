//! Config-driven experiment runner for `tsbandit`: parses TOML experiment
//! files, runs simulations, evaluates bound curves and verification suites, and
//! writes CSV.

pub mod commands;
pub mod config;
pub mod output;
pub mod verify;

pub use commands::{cmd_bounds, cmd_run, cmd_sweep, CommandError, RunOutput};
pub use config::{ConfigError, ExperimentConfig, SweepConfig};
pub use verify::{run_suite, Budget, CheckResult, Status, Suite, VerifyOptions};
