use thiserror::Error;

/// Errors raised by the library.
///
/// The first group are configuration/precondition failures (bad inputs);
/// [`Error::NonConvergence`] and [`Error::BlowUp`] are numerical failures of
/// an otherwise valid computation.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("configuration error: {0}")]
    Config(String),

    #[error("band limit mismatch: {left} vs {right}")]
    BandLimitMismatch { left: usize, right: usize },

    #[error("grid dimension mismatch: expected {expected:?}, got {got:?}")]
    DimensionMismatch {
        expected: (usize, usize),
        got: (usize, usize),
    },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("out of scope: {0}")]
    OutOfScope(String),

    #[error("Picard iteration did not converge after {iterations} iterations (last residual {residual:e})")]
    NonConvergence { iterations: usize, residual: f64 },

    #[error("blow-up detected near t = {time}: {reason}")]
    BlowUp { time: f64, reason: String },
}

impl Error {
    /// True for failures of the numerics rather than of the inputs.
    pub fn is_numerical(&self) -> bool {
        matches!(self, Error::NonConvergence { .. } | Error::BlowUp { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
