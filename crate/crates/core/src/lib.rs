//! Structural Ramsey machinery over finite categories: explicit colimits of
//! table-backed diagrams, structures over categorical languages, combinatorial
//! lines and the amalgamation constructions built from them.

pub mod colimit_block;
pub mod config;
pub mod error;
pub mod fincat;
pub mod lines;
pub mod ramsey;
pub mod structlang;
pub mod verdict;

pub use config::{Config, Limits, OutputFormat};
pub use error::{Error, Result};
