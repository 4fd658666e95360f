use thiserror::Error;

pub type Result<T> = std::result::Result<T, ZetaError>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ZetaError {
    #[error("pole at {0}")]
    Pole(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("resource limit exceeded: {0}")]
    Resource(String),
    #[error("evaluation failure: {0}")]
    Evaluation(String),
    #[error("no sign change bracketing zero n={n} within [{lo}, {hi}] after {expansions} expansions")]
    BracketFailure {
        n: u64,
        lo: f64,
        hi: f64,
        expansions: u32,
    },
    #[error("zero n={n}: delta schedule exhausted with only {agreed} agreeing digits (wanted {wanted})")]
    NonConvergence { n: u64, agreed: u32, wanted: u32 },
    #[error("zero n={n}: root found is zero {found} by the counting function")]
    Misindexed { n: u64, found: u64 },
    #[error("root finder did not converge in {0} iterations")]
    RootFinder(usize),
    #[error("missing zeros for indices {first}..={last}")]
    Gap { first: u64, last: u64 },
    #[error("ordinates not strictly increasing at index {0}")]
    NotIncreasing(u64),
    #[error("empty range: {0}")]
    EmptyRange(String),
    #[error("table too small: need {needed}, have {limit}")]
    TableTooSmall { needed: u64, limit: u64 },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("cache integrity error at line {line}: {reason}")]
    Integrity { line: usize, reason: String },
    #[error("i/o error: {0}")]
    Io(String),
    #[error("invalid configuration: {0}")]
    Config(String),
}

impl From<std::io::Error> for ZetaError {
    fn from(e: std::io::Error) -> Self {
        ZetaError::Io(e.to_string())
    }
}
