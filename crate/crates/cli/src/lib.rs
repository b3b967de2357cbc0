//! File formats, mesh export, reports and the run pipeline behind the
//! `cmc-darboux` command line.

pub mod config;
pub mod error;
pub mod mesh;
pub mod patch_io;
pub mod pipeline;
pub mod report;

pub use config::{Operation, RunConfig, Settings};
pub use error::{CliError, ExitStatus};
pub use pipeline::run;
