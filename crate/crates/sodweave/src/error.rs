use thiserror::Error;

#[derive(Debug, Error)]
pub enum EngineError {
    #[error("invalid moduli parameters: {0}")]
    InvalidParams(String),

    #[error("unsupported block shape: {0}")]
    UnsupportedBlock(String),

    #[error("index out of range: {0}")]
    IndexRange(String),

    #[error("crossing chain is not maximal: {0}")]
    ChainNotMaximal(String),

    #[error("scheduler invariant violated: {0}")]
    InvariantViolated(String),

    #[error("uncertified step in rule `{rule}`: {detail}")]
    Uncertified { rule: String, detail: String },

    #[error("malformed decomposition: {0}")]
    MalformedSod(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

impl EngineError {
    pub fn exit_code(&self) -> i32 {
        match self {
            EngineError::Uncertified { .. } => 2,
            EngineError::InvalidParams(_) => 3,
            _ => 1,
        }
    }
}
