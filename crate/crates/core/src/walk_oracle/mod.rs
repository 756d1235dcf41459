//! Brute-force enumeration of weighted quarter-plane walks.

mod model;
mod table;

pub use model::{ModelName, ModelSpec, Weights, GROUP};
pub use table::{functional_equation_residual, Selector, WalkTable};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OracleError {
    #[error("selector out of range: {0}")]
    SelectorOutOfRange(String),
    #[error("unknown model: {0}")]
    UnknownModel(String),
    #[error("invalid weight: {0}")]
    InvalidWeight(String),
}
