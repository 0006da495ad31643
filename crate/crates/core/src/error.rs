use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    Input(String),

    #[error("length mismatch: expected {expected}, got {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("vertex {0} is isolated (degree 0); the operator needs D^-1")]
    IsolatedVertex(usize),

    #[error("graph is disconnected ({components} components)")]
    Disconnected { components: usize },

    #[error("parse error at {location}: {message}")]
    Parse { location: String, message: String },

    #[error("filter value is not finite at eigenvalue index {index} (lambda = {lambda})")]
    NonFiniteFilter { index: usize, lambda: f64 },

    #[error("eigensolver did not converge (off-diagonal residual {residual:e})")]
    NoConvergence { residual: f64 },

    #[error("sampled submatrix is ill-conditioned (sigma_min = {sigma_min:e})")]
    IllConditioned { sigma_min: f64 },

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Coarse classification used for process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Input,
    Numerical,
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::NonFiniteFilter { .. }
            | Error::NoConvergence { .. }
            | Error::IllConditioned { .. }
            | Error::Numerical(_) => ErrorKind::Numerical,
            _ => ErrorKind::Input,
        }
    }

    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_len(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::LengthMismatch { expected, found })
    }
}
