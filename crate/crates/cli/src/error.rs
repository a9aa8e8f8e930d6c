use std::fmt;

/// Process-level failure classes, one exit code each.
#[derive(Debug)]
pub enum CliError {
    /// Bad configuration or command line. Exit 2.
    Config(String),
    /// A solver gave up: iteration budgets, truncation bounds. Exit 3.
    Numerical(String),
    /// An internal cross-check disagreed with itself. Exit 4.
    Consistency(String),
    /// Filesystem trouble. Exit 5.
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numerical(_) => 3,
            CliError::Consistency(_) => 4,
            CliError::Io(_) => 5,
        }
    }

    pub fn io(path: &std::path::Path, source: std::io::Error) -> Self {
        CliError::Io(format!("{}: {source}", path.display()))
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(msg) => write!(f, "config: {msg}"),
            CliError::Numerical(msg) => write!(f, "numerical: {msg}"),
            CliError::Consistency(msg) => write!(f, "consistency: {msg}"),
            CliError::Io(msg) => write!(f, "io: {msg}"),
        }
    }
}

impl From<qtherm::Error> for CliError {
    fn from(e: qtherm::Error) -> Self {
        match e {
            qtherm::Error::EigenNonConvergence { .. }
            | qtherm::Error::FixedPointNonConvergence { .. }
            | qtherm::Error::TailBoundViolated { .. }
            | qtherm::Error::TailNotDecaying { .. } => CliError::Numerical(e.to_string()),
            qtherm::Error::ConsistencyFailure { .. } => CliError::Consistency(e.to_string()),
            other => CliError::Config(other.to_string()),
        }
    }
}
