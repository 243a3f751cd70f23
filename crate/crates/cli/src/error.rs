use heis_core::HeisError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),

    #[error("numerical abort: {0}")]
    Numerical(String),

    #[error("acceptance failure: {0}")]
    Acceptance(String),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    /// 0 success, 1 configuration or i/o, 2 numerical abort, 3 acceptance failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Io { .. } => 1,
            CliError::Numerical(_) => 2,
            CliError::Acceptance(_) => 3,
        }
    }
}

impl From<HeisError> for CliError {
    fn from(e: HeisError) -> Self {
        match e {
            HeisError::CharacteristicPoint { .. }
            | HeisError::DegenerateTangentPlane { .. }
            | HeisError::NonFinite
            | HeisError::Inconclusive(_)
            | HeisError::NonCompact => CliError::Numerical(e.to_string()),
            _ => CliError::Config(e.to_string()),
        }
    }
}
