use thiserror::Error;

/// Errors raised by the state algebra and the experiment model.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("amplitudes are not normalized: |alpha|^2 + |beta|^2 = {norm_sqr}")]
    NotNormalized { norm_sqr: f64 },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("invalid photon index {index} for a {num_photons}-photon system")]
    BadIndex { index: usize, num_photons: usize },
    #[error("projectors do not sum to the identity (deviation {deviation:e})")]
    IncompleteProjectorSet { deviation: f64 },
    #[error("{name} = {value} is outside the allowed range {range}")]
    OutOfRange {
        name: &'static str,
        value: f64,
        range: &'static str,
    },
    #[error("outcome probability {probability:e} is too small to condition on")]
    ZeroProbability { probability: f64 },
    #[error("analytic rates support at most 2 pairs per pass, got {max_pairs}")]
    TooManyPairs { max_pairs: usize },
    #[error("no solution: {0}")]
    NoSolution(String),
    #[error("delay grids do not match")]
    GridMismatch,
    #[error("insufficient scan: {0}")]
    InsufficientScan(String),
    #[error("invalid matrix: {0}")]
    InvalidMatrix(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("cannot parse polarization '{0}'")]
    BadPolarization(String),
    #[error("csv output failed: {0}")]
    Csv(String),
    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        if e.is_io_error() {
            Error::Io(e.to_string())
        } else {
            Error::Csv(e.to_string())
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
