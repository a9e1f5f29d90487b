//! Batch front-end for `cfrisk`: key=value configurations, presets, and
//! CSV / JSON reports for runs, parameter sweeps and timing benchmarks.

pub mod config;
pub mod error;
pub mod presets;
pub mod report;
pub mod runner;
pub mod settings;

pub use config::{layered_settings, Format, RunConfig};
pub use error::CliError;
pub use report::{Report, Row};
