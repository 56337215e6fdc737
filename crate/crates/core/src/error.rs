use thiserror::Error;

/// Errors produced by the analysis routines.
///
/// Words carried inside errors are rendered over the table's alphabet so that
/// messages are meaningful without the originating table.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("alphabet must be nonempty")]
    EmptyAlphabet,
    #[error("symbol {0:?} appears twice in the alphabet")]
    DuplicateSymbol(char),
    #[error("alphabets larger than 256 symbols are not supported")]
    AlphabetTooLarge,
    #[error("symbol {0:?} is not in the alphabet")]
    UnknownSymbol(char),
    #[error("letter index {0} is outside the alphabet")]
    UnknownLetter(usize),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("image of {0:?} is empty")]
    EmptyImage(char),
    #[error("substitution is not primitive")]
    NotPrimitive,
    #[error("factor sets did not stabilize within {cap} iterations")]
    CapExceeded { cap: usize },
    #[error("sequence of length {length} is too short for {needed}")]
    PrefixTooShort { length: usize, needed: usize },
    #[error("{what} = {value} is out of range (valid: {min}..={max})")]
    OutOfRange {
        what: &'static str,
        value: usize,
        min: usize,
        max: usize,
    },
    #[error("word {0:?} is not in the language")]
    NotInLanguage(String),
    #[error("table is inconsistent: {0}")]
    Inconsistent(String),
    #[error("language is not that of an infinite minimal shift: {0}")]
    NotMinimal(String),
    #[error("continued fraction ran out of quotients at length {reached}, needed {needed}")]
    InsufficientQuotients { reached: usize, needed: usize },
    #[error("invalid continued fraction: {0}")]
    InvalidContinuedFraction(String),
    #[error("probe too short: {occurrences} occurrence(s) of {word:?}, at least 2 required")]
    ProbeTooShort { word: String, occurrences: usize },
    #[error("window {0:?} is outside the rule domain")]
    WindowNotInDomain(String),
    #[error("table depth {available} is too shallow, {needed} required")]
    TableTooShallow { needed: usize, available: usize },
    #[error("codes are defined over different language tables")]
    TableMismatch,
    #[error(
        "not an endomorphism: factor {factor:?} maps to {image:?}, which is not in the language"
    )]
    NotEndomorphism { factor: String, image: String },
    #[error("search budget exhausted after {nodes} nodes")]
    BudgetExceeded { nodes: u64 },
    #[error("census has no order with a nonzero count")]
    EmptyCensus,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("malformed document: {0}")]
    Json(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl From<serde_json::Error> for Error {
    fn from(err: serde_json::Error) -> Self {
        Error::Json(err.to_string())
    }
}
