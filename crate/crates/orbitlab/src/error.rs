//! Error types shared across the crate.

use thiserror::Error;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum ArithError {
    #[error("all coordinates are zero")]
    AllZero,
    #[error("zero input where a nonzero rational is required")]
    ZeroInput,
    #[error("{0} is not prime")]
    NotPrime(String),
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum HeightError {
    #[error("points live in different projective spaces")]
    DimensionMismatch,
    #[error("subscheme spec has no forms")]
    EmptySpec,
    #[error("operation requires the points-with-multiplicities mode")]
    WrongMode,
    #[error("invalid subscheme spec: {0}")]
    InvalidSpec(String),
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum MapError {
    #[error("defining forms share a root: resultant vanishes")]
    CommonRoot,
    #[error("forms invalid: {0}")]
    FormsInvalid(String),
    #[error("iterate degree {0} exceeds the configured cap {1}")]
    DegreeCapExceeded(u64, u64),
    #[error("factor degrees must be sorted nonincreasing")]
    UnsortedInput,
}

/// Signal, not a failure: every defining form vanished at the point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndeterminacyHit;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum DegreeError {
    #[error("orbit too short: need at least {0} records, have {1}")]
    OrbitTooShort(usize, usize),
    #[error("factor degrees must be sorted nonincreasing")]
    UnsortedInput,
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum MultError {
    #[error("fiber degree {0} exceeds the configured cap {1}")]
    DegreeCapExceeded(u64, u64),
    #[error("cocycle table too short: need at least {0} entries, have {1}")]
    TableTooShort(usize, usize),
}
