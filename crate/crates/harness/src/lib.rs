//! Instance generation, exhaustive enumeration, sweeps and JSON reports for
//! the `bisect` command.

pub mod enumerate;
pub mod error;
pub mod generate;
pub mod report;
pub mod solve;
pub mod sweep;

pub use error::HarnessError;
