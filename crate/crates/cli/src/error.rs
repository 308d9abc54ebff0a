use crate::spec::SpecError;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error(transparent)]
    Spec(#[from] SpecError),

    #[error("invalid `{field}`: {reason}")]
    Param { field: &'static str, reason: String },

    #[error("{path}:{line}: {message}")]
    Config { path: String, line: usize, message: String },

    #[error(transparent)]
    Core(#[from] hankel_lab::Error),

    #[error("cannot write report: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    /// 3 for non-convergence, 2 for everything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(hankel_lab::Error::NotConverged { .. }) => 3,
            _ => 2,
        }
    }
}
