use thiserror::Error;

/// Everything that can go wrong while reading, building or checking models.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },

    #[error("label `{0}` is declared both as an input and as an output")]
    AlphabetOverlap(String),

    #[error("undeclared state `{0}`")]
    UndeclaredState(String),

    #[error("undeclared label `{0}`")]
    UndeclaredLabel(String),

    #[error("`{0}` is a reserved name")]
    ReservedName(String),

    #[error("invalid token `{0}`")]
    InvalidToken(String),

    #[error("missing `init` line")]
    MissingInit,

    #[error("state `{state}` has more than one `{label}` transition")]
    Nondeterministic { state: String, label: String },

    #[error("model is divergent: tau-cycle through {0}")]
    Divergent(String),

    #[error("model is not input-enabled at {0}")]
    NotInputEnabled(String),

    #[error("alphabet precondition violated: {0}")]
    Alphabet(String),

    #[error("symbol `{0}` is outside the alphabet")]
    UnknownSymbol(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("resource limit exceeded: more than {0} states")]
    ResourceLimit(usize),

    #[error("cancelled")]
    Cancelled,

    #[error("adapter failure: {0}")]
    Adapter(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
