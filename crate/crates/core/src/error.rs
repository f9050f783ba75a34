use thiserror::Error;

/// Every domain failure the library can report.
///
/// The variant name doubles as the error code printed by the CLI.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ZeckError {
    #[error("coefficient list is empty")]
    EmptyCoeffs,
    #[error("leading and trailing coefficients c_1 and c_L must be at least 1")]
    ZeroLeadCoeff,
    #[error("coefficient {index} is negative ({value})")]
    NegativeCoeff { index: usize, value: i64 },
    #[error("initial term {index} must be positive")]
    NonPositiveInitialTerm { index: usize },
    #[error("expected {expected} initial terms, got {got}")]
    WrongInitialLength { expected: usize, got: usize },
    #[error("table of {len} terms is too short, need at least {needed}")]
    TableTooShort { len: usize, needed: usize },
    #[error("value {value} is outside the table range [0, {bound})")]
    OutOfRange { value: String, bound: String },
    #[error("value {value} has no legal decomposition over this sequence")]
    Unrepresentable { value: String },
    #[error("digit string is not a legal decomposition")]
    NotLegal,
    #[error("enumeration needs {needed} strings, budget is {budget}")]
    BudgetExceeded { needed: String, budget: u64 },
    #[error("table has no super-legal counts attached")]
    MissingHValues,
    #[error("index out of range: {0}")]
    IndexOutOfRange(String),
    #[error(
        "block at j={j}, length {length}, position {position} overhangs a string of length {n}"
    )]
    BoundaryRegime {
        n: usize,
        j: usize,
        length: usize,
        position: usize,
    },
    #[error("no value has a_{i} = {k}")]
    EmptyCondition { i: usize, k: u32 },
    #[error("input must be positive")]
    NonPositiveInput,
    #[error("digit {digit} is outside [1, {base})")]
    DigitOutOfRange { digit: u32, base: u32 },
    #[error("base must be at least 2, got {0}")]
    BadBase(u32),
    #[error("need at least 2 samples for a variance, got {0}")]
    DegenerateSample(usize),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

impl ZeckError {
    /// Stable variant name, used in CLI error output.
    pub fn name(&self) -> &'static str {
        match self {
            ZeckError::EmptyCoeffs => "EmptyCoeffs",
            ZeckError::ZeroLeadCoeff => "ZeroLeadCoeff",
            ZeckError::NegativeCoeff { .. } => "NegativeCoeff",
            ZeckError::NonPositiveInitialTerm { .. } => "NonPositiveInitialTerm",
            ZeckError::WrongInitialLength { .. } => "WrongInitialLength",
            ZeckError::TableTooShort { .. } => "TableTooShort",
            ZeckError::OutOfRange { .. } => "OutOfRange",
            ZeckError::Unrepresentable { .. } => "Unrepresentable",
            ZeckError::NotLegal => "NotLegal",
            ZeckError::BudgetExceeded { .. } => "BudgetExceeded",
            ZeckError::MissingHValues => "MissingHValues",
            ZeckError::IndexOutOfRange(_) => "IndexOutOfRange",
            ZeckError::BoundaryRegime { .. } => "BoundaryRegime",
            ZeckError::EmptyCondition { .. } => "EmptyCondition",
            ZeckError::NonPositiveInput => "NonPositiveInput",
            ZeckError::DigitOutOfRange { .. } => "DigitOutOfRange",
            ZeckError::BadBase(_) => "BadBase",
            ZeckError::DegenerateSample(_) => "DegenerateSample",
            ZeckError::InvalidParameter(_) => "InvalidParameter",
        }
    }
}

pub type Result<T> = std::result::Result<T, ZeckError>;
