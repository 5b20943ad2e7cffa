//! Command-line front end for `pairker`: a symbol-expression language,
//! JSON output, and seeded randomized verification suites.

pub mod commands;
pub mod config;
pub mod expr;
pub mod generate;
pub mod output;
pub mod verify;

pub use commands::{run, Outcome};
pub use config::Settings;
pub use verify::{run_suite, Suite, VerificationReport};
