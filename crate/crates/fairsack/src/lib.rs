//! File formats, rendering and the `fairsack` command line on top of
//! `fairsack-core`.

pub mod cli;
pub mod format;
pub mod parallel;
pub mod render;

pub use cli::{run, run_args, Cli, Outcome};
