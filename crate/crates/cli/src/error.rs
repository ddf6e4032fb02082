use std::path::PathBuf;

/// Errors surfaced by the file formats, the harness and the CLI.
#[derive(Debug, thiserror::Error)]
pub enum ToolError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error(transparent)]
    Core(#[from] gauge_ideals::Error),
}

impl ToolError {
    pub fn invalid(msg: impl Into<String>) -> Self {
        ToolError::Invalid(msg.into())
    }

    /// Process exit code: 3 for exhausted budgets, 2 for everything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            ToolError::Core(gauge_ideals::Error::BudgetExceeded { .. }) => 3,
            _ => 2,
        }
    }
}

pub type Result<T, E = ToolError> = std::result::Result<T, E>;
