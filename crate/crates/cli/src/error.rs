use std::fmt;
use std::process::ExitCode;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Domain(hwlaw::Error),
    Io(std::io::Error),
    /// Outputs were written but some check failed.
    Verification(usize),
    /// Outputs were written but some quadrature missed its tolerance.
    NonConvergence(usize),
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        ExitCode::from(match self {
            CliError::Verification(_) => 1,
            CliError::Usage(_) | CliError::Domain(_) | CliError::Io(_) => 2,
            CliError::NonConvergence(_) => 3,
        })
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Domain(e) => write!(f, "{e}"),
            CliError::Io(e) => write!(f, "i/o error: {e}"),
            CliError::Verification(n) => write!(f, "{n} check(s) failed"),
            CliError::NonConvergence(n) => write!(f, "{n} value(s) did not reach the requested tolerance"),
        }
    }
}

impl From<hwlaw::Error> for CliError {
    fn from(e: hwlaw::Error) -> Self {
        CliError::Domain(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Usage(format!("csv: {e}"))
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Usage(format!("json: {e}"))
    }
}
