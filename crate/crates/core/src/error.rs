use crate::polycore::Monomial;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("basis is empty")]
    EmptyBasis,
    #[error("polynomial has no terms")]
    EmptyPolynomial,
    #[error("dimension mismatch: expected {expected} variables, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("duplicate monomial {0} in basis")]
    DuplicateMonomial(Monomial),
    #[error("coefficient of {0} is not finite")]
    NonFiniteCoefficient(Monomial),
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),
    #[error("parse error at byte {offset}: {message}")]
    Parse { offset: usize, message: String },
    #[error("basis does not cover {} support monomial(s)", .0.len())]
    MissingCoverage(Vec<Monomial>),
    #[error("numerical failure: {0}")]
    NumericalFailure(String),
    #[error("predictor requires a ground-truth basis")]
    MissingGroundTruth,
    #[error("predictor failed: {0}")]
    Predictor(String),
    #[error("expansion factor must exceed 1, got {0}")]
    InvalidRho(f64),
    #[error("empty input")]
    EmptyInput,
    #[error("invalid sample #{index}: m1={m1} exceeds eta={eta}")]
    InvalidSample { index: usize, m1: usize, eta: usize },
    #[error("cannot draw {requested} distinct monomials; only {available} exist")]
    PoolExhausted { requested: usize, available: usize },
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("dataset schema version {found} is not supported (expected {expected})")]
    SchemaVersion { found: u32, expected: u32 },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
