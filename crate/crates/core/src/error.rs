use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid recurrence spec: {0}")]
    InvalidSpec(String),

    /// Exhaustive enumeration was asked for an interval larger than the budget.
    #[error("enumeration budget exceeded at level {level}: delta = {delta} > budget {budget}")]
    BudgetExceeded {
        level: usize,
        delta: String,
        budget: u64,
    },

    #[error("value out of generated sequence range: {0}")]
    OutOfRange(String),

    #[error("illegal coefficient string: {0}")]
    IllegalCoefficients(String),

    #[error("fit window too small: need at least {need} levels, got {got}")]
    WindowTooSmall { need: usize, got: usize },

    #[error("degenerate polynomial: {0}")]
    DegeneratePolynomial(String),

    #[error("zero variance: standardized statistics are undefined")]
    ZeroVariance,
}

pub type Result<T> = std::result::Result<T, Error>;
