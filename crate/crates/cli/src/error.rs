use restruct_core::Error;

/// Process exit codes.
pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_INFEASIBLE: i32 = 3;
pub const EXIT_TOO_LARGE: i32 = 4;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{field}: {message}")]
    Input { field: String, message: String },

    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },

    #[error("{0}")]
    Core(#[from] Error),
}

impl CliError {
    pub fn input(field: impl Into<String>, message: impl Into<String>) -> CliError {
        CliError::Input { field: field.into(), message: message.into() }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input { .. } | CliError::Io { .. } => EXIT_INPUT,
            CliError::Core(e) => match e.root() {
                Error::Infeasible(_) | Error::InfeasibleWithBudget { .. } | Error::NoSpanningTree => EXIT_INFEASIBLE,
                Error::TooLarge { .. } => EXIT_TOO_LARGE,
                _ => EXIT_INPUT,
            },
        }
    }
}
