//! Error type shared across the crate.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension must be at least 2, got {0}")]
    InvalidDimension(usize),
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("parameter out of domain: {0}")]
    Domain(&'static str),
    #[error("empty sample set")]
    EmptySample,
    #[error("band rejection sampling gave up after {0} draws")]
    PathologicalBand(u64),
    #[error("the origin does not belong to any wedge region")]
    AmbiguousRegion,
    #[error("cannot normalize a vector with near-zero norm")]
    ZeroVector,
}

pub type Result<T> = core::result::Result<T, Error>;
