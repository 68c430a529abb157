use thiserror::Error;

pub type Result<T, E = IglError> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum IglError {
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error("evaluation at a pole (x = {0})")]
    Pole(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
}

impl IglError {
    pub fn parse(line: usize, msg: impl Into<String>) -> Self {
        IglError::Parse { line, msg: msg.into() }
    }

    pub fn invalid(msg: impl Into<String>) -> Self {
        IglError::InvalidInput(msg.into())
    }

    pub fn invariant(msg: impl Into<String>) -> Self {
        IglError::Invariant(msg.into())
    }

    /// Process exit code used by the command-line tool.
    pub fn exit_code(&self) -> i32 {
        match self {
            IglError::Parse { .. } | IglError::Io(_) | IglError::InvalidInput(_) => 2,
            IglError::Invariant(_) | IglError::Pole(_) | IglError::Dimension { .. } => 3,
        }
    }
}
