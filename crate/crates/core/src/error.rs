use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("zero denominator")]
    ZeroDenominator,

    #[error("division by zero")]
    DivisionByZero,

    #[error("base must be a positive integer, got {0}")]
    NonPositiveBase(i64),

    #[error("cannot parse rational from {0:?}")]
    ParseRational(String),

    #[error("non-unit series: constant term is zero")]
    NonUnitSeries,

    #[error("composition requires zero constant term")]
    CompositionConstantTerm,

    /// A coefficient below the requested valuation was nonzero.
    #[error("valuation too small: coefficient of t^{index} is nonzero, expected valuation {required}")]
    ValuationTooSmall { index: usize, required: usize },

    #[error("invalid index vector: {0}")]
    InvalidIndex(String),

    #[error("usage error: {0}")]
    Usage(String),
}

impl Error {
    /// True for errors that signal a broken internal invariant rather than bad input.
    pub fn is_internal(&self) -> bool {
        matches!(self, Error::ValuationTooSmall { .. })
    }
}
