//! Affine forms in boundary unknowns and the moves the kernel method makes on them.

mod coef;
mod extract;
mod form;
pub mod solve;
mod tag;

pub use coef::{Coef, Surd};
pub use extract::{extract, fe_form, point_identity, section_identity, Axis, FnKind};
pub use form::{LinearForm, Split};
pub use solve::{determinant, solve_system, Solved};
pub use tag::UnknownTag;

use crate::exact_series::SeriesError;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum FormError {
    #[error("unbounded support: {0}")]
    UnboundedSupport(String),
    #[error("cannot eliminate {0}: {1}")]
    NotEliminable(UnknownTag, String),
    #[error("coefficient of {tag} does not vanish at the root (residual valuation {valuation})")]
    KernelNotCancelled { tag: UnknownTag, valuation: String },
    #[error("singular system: determinant vanishes through t^{0}")]
    SingularSystem(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error(transparent)]
    Series(#[from] SeriesError),
}

pub type FormResult<T> = Result<T, FormError>;
