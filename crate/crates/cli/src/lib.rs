//! Command implementations, report rendering and the seeded randomized
//! suites behind the `minkowski` binary.

pub mod commands;
pub mod random;
pub mod report;
pub mod runner;
pub mod suites;

pub use commands::{load_input, Input};
pub use report::{Exit, Format, Outcome, Report};
pub use runner::{run_trials, RunConfig};
