use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("digit set is empty")]
    EmptySet,
    #[error("invalid digit {token:?}: expected a non-negative decimal integer")]
    InvalidToken { token: String },
    #[error("digit set must contain 0")]
    MissingZero,
    #[error("digit {0} appears more than once")]
    DuplicateElement(u64),
    #[error("digit {0} is negative; digits must be non-negative")]
    NegativeElement(String),
    #[error("largest digit {max} exceeds the cap of {cap}")]
    TooLarge { max: u64, cap: u64 },

    #[error("brute-force oracle is limited to n <= {cap}, got {n}")]
    OracleCapExceeded { n: u64, cap: u64 },
    #[error("summation of {terms} terms exceeds the budget of {budget}")]
    BudgetExceeded { terms: String, budget: u64 },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("characteristic polynomial coefficient {index} is not integral")]
    InternalExactnessFailure { index: usize },

    #[error("growth coefficient undefined: no odd element in {{{set}}}")]
    OddElementRequired { set: String },
    #[error("no three consecutive candidates agree for {{{set}}}, m = {m}, up to r = {r_max}")]
    StabilityFailure { set: String, m: u64, r_max: u32 },
    #[error("t must be at least 2, got {0}")]
    InvalidT(u64),

    #[error("memo cache line {line}: {reason}")]
    CacheFormat { line: usize, reason: String },
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl Error {
    /// True for errors caused by malformed or out-of-range user input.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::EmptySet
                | Error::InvalidToken { .. }
                | Error::MissingZero
                | Error::DuplicateElement(_)
                | Error::NegativeElement(_)
                | Error::TooLarge { .. }
                | Error::OracleCapExceeded { .. }
                | Error::DimensionMismatch { .. }
                | Error::InvalidT(_)
                | Error::CacheFormat { .. }
                | Error::Io(_)
        )
    }
}
