use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{line}:{col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },
    #[error("config: {0}")]
    Config(String),
    #[error("{0}")]
    Input(String),
    #[error(transparent)]
    Core(#[from] bklr_core::Error),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl CliError {
    /// Every error is an input error; verification failures are reports.
    pub fn exit_code(&self) -> i32 {
        2
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
