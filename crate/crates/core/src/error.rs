use thiserror::Error;

pub type Result<T> = std::result::Result<T, KronError>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KronError {
    /// Input document does not match the expected schema.
    #[error("parse error in `{field}`: {message}")]
    Parse { field: String, message: String },

    /// Input parsed but violates a documented invariant (e.g. `a_1 != 1`).
    #[error("validation error in `{field}`: {message}")]
    Validation { field: String, message: String },

    /// Argument outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A precondition tied to the dynamics (e.g. non-resonance) failed.
    #[error("precondition failed: {0}")]
    Precondition(String),

    /// The input is well formed but falls outside the structures we can
    /// classify exactly.
    #[error("unsupported structure in `{structure}`: {message}")]
    Unsupported { structure: String, message: String },
}

impl KronError {
    pub fn parse(field: impl Into<String>, message: impl Into<String>) -> Self {
        KronError::Parse {
            field: field.into(),
            message: message.into(),
        }
    }

    pub fn validation(field: impl Into<String>, message: impl Into<String>) -> Self {
        KronError::Validation {
            field: field.into(),
            message: message.into(),
        }
    }

    pub fn unsupported(structure: impl Into<String>, message: impl Into<String>) -> Self {
        KronError::Unsupported {
            structure: structure.into(),
            message: message.into(),
        }
    }

    /// Process exit status used by the command line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            KronError::Unsupported { .. } => 2,
            _ => 1,
        }
    }
}
