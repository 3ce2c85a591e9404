use std::process::ExitCode;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// Parameters parse but violate a model constraint or a check failed.
    #[error("{0}")]
    Constraint(String),
    #[error("{0}")]
    Parse(String),
    #[error("{context}: {source}")]
    Io {
        context: String,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn io(context: impl Into<String>) -> impl FnOnce(std::io::Error) -> Self {
        let context = context.into();
        move |source| CliError::Io { context, source }
    }

    pub fn exit_code(&self) -> ExitCode {
        match self {
            CliError::Constraint(_) => ExitCode::from(1),
            CliError::Parse(_) | CliError::Io { .. } => ExitCode::from(2),
        }
    }
}

impl From<dephase_core::Error> for CliError {
    fn from(e: dephase_core::Error) -> Self {
        match e {
            dephase_core::Error::Io(source) => CliError::Io {
                context: "i/o".into(),
                source,
            },
            other => CliError::Constraint(other.to_string()),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
