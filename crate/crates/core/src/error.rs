use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("index {index} out of range (size {size})")]
    OutOfRange { index: usize, size: usize },

    #[error("cell {0} is already assigned")]
    AlreadyAssigned(usize),

    #[error("unknown axiom `{name}`; accepted axioms: {accepted}")]
    UnknownAxiom { name: String, accepted: String },

    #[error("axiom `{axiom}` does not apply to {family} rules")]
    FamilyMismatch { axiom: String, family: String },

    #[error("DIMACS parse error at line {line}: {message}")]
    Dimacs { line: usize, message: String },

    #[error("model does not match the variable legend: {0}")]
    Decode(String),

    #[error("resource budget exhausted: {0}")]
    ResourceExhausted(String),

    #[error("problem too large: {0}")]
    TooLarge(String),

    #[error("malformed witness: {0}")]
    Witness(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
