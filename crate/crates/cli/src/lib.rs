//! Serialization, reports and output plumbing behind the `walks` binary.

pub mod document;
pub mod error;
pub mod output;
pub mod report;

pub use document::{DocumentError, SeriesDocument, Term, WeightStrings};
pub use report::{SolveBundle, VerifyReport};
pub use error::error_name;
