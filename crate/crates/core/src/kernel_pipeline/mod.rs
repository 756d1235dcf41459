//! The algebraic kernel method: orbit sums, canonical factorisation, kernel roots and the
//! final linear solve.

mod factor;
mod orbit;
mod orbit_system;
mod roots;
mod series_stage;
mod solver;

pub use factor::{canonical_factorization, Factorization};
pub use orbit::{exact_stage, ExactStage};
pub use orbit_system::{kreweras_nc_closed_form, OrbitSystem, HALF_COLUMNS};
pub use roots::{kernel_roots, printed_kernel, KernelRoot, RootFamily};
pub use series_stage::{row_scale, series_stage, HEquation, SeriesStage};
pub use solver::{solve, DeterminantReport, Solution, SolveOptions, StageReport};

use crate::exact_series::SeriesError;
use crate::linear_forms::FormError;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum PipelineError {
    #[error("null-vector identity failed: {0}")]
    NullvectorCheckFailed(String),
    #[error("unexpected unknowns after {stage}: {found}")]
    UnexpectedUnknowns { stage: &'static str, found: String },
    #[error("no nonsingular equation set among {0}")]
    NoSolvableSubset(String),
    #[error("precision exhausted: needed t^{needed}, reached t^{reached} at working order {working}")]
    PrecisionExhausted { needed: i64, reached: i64, working: i64 },
    #[error("kernel root {label} is not a root of its printed factor")]
    RootCheckFailed { label: String },
    #[error("inconsistent solution: {0}")]
    Inconsistent(String),
    #[error(transparent)]
    Form(#[from] FormError),
    #[error(transparent)]
    Series(#[from] SeriesError),
}

pub type PipelineResult<T> = Result<T, PipelineError>;
