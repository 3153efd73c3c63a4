//! Batch front end: loads JSON instances, dispatches to the engine and
//! emits re-checkable certificates.

pub mod certificate;
pub mod load;
pub mod request;

pub use certificate::{certify, recheck, Certificate, Recheck};
pub use load::{load_json, parse_json, CliError, CliResult};
pub use request::{execute, parse_category, Outcome, Report, Request};
