//! Command-line front end for `kinkforge-core`: configuration, execution,
//! and CSV, JSON and SVG output.

pub mod args;
pub mod config;
pub mod output;
pub mod run;
pub mod svg;
pub mod validate;

pub use args::Args;
pub use config::{Command, Format, Grid, RunConfig, Species};
pub use output::{Cell, ResultEnvelope};
pub use run::{run, CliError, RunOutput};
