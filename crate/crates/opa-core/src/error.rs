use alloc::boxed::Box;
use alloc::string::String;
use thiserror::Error;

/// Errors produced by kernel construction, decomposition and scans.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("grid mismatch: {0}")]
    GridMismatch(String),
    #[error("numerical failure: {0}")]
    NumericalFailure(String),
    /// The curve never falls below half maximum inside the sampled range.
    #[error("no half-maximum crossing: {0}")]
    NoCrossing(String),
    /// A scan point failed; the offending central angle is identified.
    #[error("scan point at central angle {angle_mrad} mrad: {source}")]
    ScanPoint {
        angle_mrad: f64,
        #[source]
        source: Box<Error>,
    },
}

pub type Result<T> = core::result::Result<T, Error>;
