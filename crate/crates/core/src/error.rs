use thiserror::Error;

/// Errors raised by the solver library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("filter damps nothing: sigma(M) = 1 for a non-trivial filter variant")]
    InertFilter,

    #[error("{what} did not converge within {budget} iterations")]
    NonConvergence { what: &'static str, budget: usize },

    #[error("overflow while squaring in the matrix exponential (after {squarings} squarings)")]
    ExpmOverflow { squarings: u32 },

    #[error("matrix is singular")]
    Singular,

    #[error("non-finite value in state at t = {time}: mode {mode}, index {index}")]
    NonFinite { time: f64, mode: i32, index: usize },

    #[error("not enough peaks before t_F = {t_f}: found {found}, need at least 2")]
    TooFewPeaks { t_f: f64, found: usize },

    #[error("argument {0} lies outside the validated region of the plasma dispersion function")]
    OutOfRegion(String),

    #[error("operation not supported for this model: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidParameter(msg.into()))
}
