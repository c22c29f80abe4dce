//! Batch verification harness behind the `ptolemy` binary.

pub mod checks;
pub mod config;
pub mod report;
pub mod runner;

pub use config::{ConfigError, FileConfig, Format, ModelKind, Overrides, Suite, SuiteConfig};
pub use report::Report;
pub use runner::run;
