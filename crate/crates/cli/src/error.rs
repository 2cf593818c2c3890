use cutilde_core::CuError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{line}:{col}: syntax error: {message}")]
    Syntax { line: usize, col: usize, message: String },
    #[error("{line}:{col}: {message}")]
    Invalid { line: usize, col: usize, message: String },
    #[error("unknown {kind} `{name}`")]
    Unknown { kind: &'static str, name: String },
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] CuError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl CliError {
    pub fn at(pos: (usize, usize), message: impl Into<String>) -> Self {
        CliError::Invalid { line: pos.0, col: pos.1, message: message.into() }
    }
}
