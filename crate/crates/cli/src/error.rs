use mcurves::GeomError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("spec parse error at line {line}, column {column}: {message}")]
    Spec { line: usize, column: usize, message: String },
    #[error("invalid spec: {0}")]
    InvalidSpec(String),
    #[error(transparent)]
    Numeric(#[from] GeomError),
    #[error("export validation failed: {0}")]
    Validation(String),
    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    /// 1 for usage and parse problems, 2 for numeric or precondition failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Spec { .. } | CliError::InvalidSpec(_) | CliError::Io { .. } => 1,
            CliError::Numeric(GeomError::Expr(_)) => 1,
            CliError::Numeric(_) | CliError::Validation(_) => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
