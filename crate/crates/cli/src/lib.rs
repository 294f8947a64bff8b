//! Configuration parsing, built-in presets, CSV and gnuplot emission, and the
//! command-line orchestration for the coupled-oscillator transparency
//! simulator.

pub mod config;
pub mod csv;
pub mod plot;
pub mod presets;
pub mod report;
pub mod run;

pub use config::{parse_config, ConfigError, Preset};
pub use report::RunReport;
pub use run::{run, Cli, CliError};
