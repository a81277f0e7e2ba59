use std::fmt;

/// Process exit codes.
pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        CliError { code: EXIT_USAGE, message: message.into() }
    }

    pub fn numerical(message: impl Into<String>) -> Self {
        CliError { code: EXIT_NUMERICAL, message: message.into() }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for CliError {}

impl From<roughscat::Error> for CliError {
    fn from(e: roughscat::Error) -> Self {
        use roughscat::Error::*;
        let code = match e {
            Config(_) | Domain(_) | TooClose(_) => EXIT_USAGE,
            Singularity(_) | Assembly(_) | Solve(_) => EXIT_NUMERICAL,
        };
        CliError { code, message: e.to_string() }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
