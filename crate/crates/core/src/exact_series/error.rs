use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeriesError {
    #[error("lowest coefficient {0} is not an invertible monomial")]
    NonMonomialLeadingTerm(String),
    #[error("leading term {0} has no rational square root")]
    NonSquareLeadingTerm(String),
    #[error("series vanishes through its accurate order {0:?}")]
    ZeroSeries(Option<i64>),
    #[error("precision exhausted: need order {needed}, have {available}")]
    PrecisionExhausted { needed: i64, available: i64 },
    #[error("roots share the leading term {0}")]
    IndistinctLeadingTerms(String),
    #[error("leading coefficient needs an irrational root of {0}")]
    NonRationalLeadingCoefficient(String),
    #[error("inexact division at t-order {order}: {detail}")]
    DivisibilityFailure { order: i64, detail: String },
    #[error("substituted series must have positive valuation, got {0}")]
    NonPositiveValuation(String),
}

pub type SeriesResult<T> = Result<T, SeriesError>;
