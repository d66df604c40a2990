use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Core(#[from] dicke_core::Error),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    /// 2 for anything the user can fix in the arguments, 1 for numerical
    /// failures, 3 for I/O.
    pub fn exit_code(&self) -> i32 {
        use dicke_core::Error as E;
        match self {
            CliError::Config(_) => 2,
            CliError::Core(E::ConvergenceFailure { .. } | E::StepFailure { .. }) => 1,
            CliError::Core(_) => 2,
            CliError::Io(_) => 3,
        }
    }
}
