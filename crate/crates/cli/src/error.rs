use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// Bad arguments; carries the rendered usage/help text.
    #[error("{0}")]
    Usage(String),

    #[error("{0}")]
    Input(String),

    #[error("{0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Input(_) => 1,
            CliError::Internal(_) => 2,
        }
    }
}

impl From<discord_core::Error> for CliError {
    fn from(e: discord_core::Error) -> Self {
        if e.is_internal() {
            CliError::Internal(e.to_string())
        } else {
            CliError::Input(e.to_string())
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Input(e.to_string())
    }
}
