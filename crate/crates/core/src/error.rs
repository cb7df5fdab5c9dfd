use thiserror::Error;

/// Errors raised by the simulation and analysis routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid size: {0}")]
    InvalidSize(String),

    #[error("{what} = {value} exceeds the configured limit of {limit}")]
    ResourceLimit {
        what: &'static str,
        value: usize,
        limit: usize,
    },

    #[error("invalid target: {0}")]
    InvalidTarget(String),

    #[error("probability {0} is outside [0, 1]")]
    InvalidProbability(f64),

    #[error("numerical consistency check failed: {0}")]
    Numerical(String),

    #[error("gate {0} is not supported by this noise model")]
    UnsupportedGate(String),

    #[error("unsupported topology: {0}")]
    UnsupportedTopology(String),

    #[error("cannot parse {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_probability(p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::InvalidProbability(p))
    }
}
