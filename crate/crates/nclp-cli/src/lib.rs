//! Harness around the `nclp` library: JSON persistence, a seeded property
//! suite, single-shot demos and the commutative oracle.

pub mod config;
pub mod demo;
pub mod error;
pub mod io;
pub mod oracle;
pub mod rng;
pub mod suite;

pub use config::SuiteConfig;
pub use error::CliError;
pub use suite::{run_selected, run_suite, SuiteReport};
