use std::path::{Path, PathBuf};

use liesym::lie::{LieError, OdeFileError};
use liesym::numeric::NumericError;
use liesym::solver::SolverError;

/// Process exit status.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Exit {
    Ok = 0,
    InputError = 2,
    InvariantViolation = 3,
}

impl Exit {
    pub fn code(self) -> i32 {
        self as i32
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{}: {source}", path.display())]
    Read {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{}: {source}", path.display())]
    Write {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{}:{}: {}", path.display(), source.line, source.kind)]
    OdeFile {
        path: PathBuf,
        source: OdeFileError,
    },
    #[error("{}: {msg}", path.display())]
    Reference { path: PathBuf, msg: String },
    #[error("invalid argument: {0}")]
    Argument(String),
    #[error(transparent)]
    Solver(SolverError),
    #[error(transparent)]
    Numeric(NumericError),
}

impl CliError {
    pub fn ode_file(path: &Path, source: OdeFileError) -> Self {
        CliError::OdeFile {
            path: path.to_path_buf(),
            source,
        }
    }

    pub fn exit(&self) -> Exit {
        match self {
            CliError::Solver(SolverError::Invariant(_))
            | CliError::Solver(SolverError::Lie(LieError::Invariant(_)))
            | CliError::Numeric(NumericError::Lie(LieError::Invariant(_))) => {
                Exit::InvariantViolation
            }
            _ => Exit::InputError,
        }
    }
}

impl From<SolverError> for CliError {
    fn from(e: SolverError) -> Self {
        CliError::Solver(e)
    }
}

impl From<LieError> for CliError {
    fn from(e: LieError) -> Self {
        CliError::Solver(e.into())
    }
}

impl From<NumericError> for CliError {
    fn from(e: NumericError) -> Self {
        CliError::Numeric(e)
    }
}
