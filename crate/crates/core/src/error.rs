use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("configuration error: {0}")]
    Config(String),

    #[error("consistency check failed: {0}")]
    Consistency(String),

    #[error("non-finite value in cell ({i}, {j}) during {stage}")]
    NonFinite { i: isize, j: isize, stage: String },

    #[error("Jacobi iteration did not converge after {iterations} sweeps (relative residual {residual:e})")]
    JacobiDiverged { iterations: usize, residual: f64 },

    #[error("scenario error: {0}")]
    Scenario(String),

    #[error("usage: {0}")]
    Usage(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Process exit code for the command line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Usage(_) | Error::Config(_) => 1,
            _ => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
