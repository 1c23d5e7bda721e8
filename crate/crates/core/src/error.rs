use alloc::string::String;
use thiserror::Error;

/// Errors raised by the core library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("size mismatch in {what}: expected {expected}, found {found}")]
    SizeMismatch {
        what: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("edge feature row {row} mixes missing and present entries")]
    MixedEdgeRow { row: usize },

    #[error("invalid dimension: {0}")]
    InvalidDimension(&'static str),

    #[error("not a bijection on 0..{0}")]
    NotABijection(usize),

    #[error("graph order {order} exceeds the exhaustive search limit {limit}")]
    SearchLimit { order: usize, limit: usize },

    #[error("vertex {vertex} out of range for order {order}")]
    VertexOutOfRange { vertex: usize, order: usize },

    #[error("invalid probability {value} for {what}")]
    InvalidProbability { what: &'static str, value: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("support size {size} exceeds cap {cap}")]
    SupportCap { size: usize, cap: usize },

    #[error("no probability mass left after filtering the support")]
    ZeroMass,

    #[error("support entry {index} violates assumption: {assumption}")]
    AssumptionViolated {
        index: usize,
        assumption: &'static str,
    },

    #[error("observation does not belong to any class of the scheme")]
    UnknownObservation,

    #[error("k = {k} out of range 1..={max}")]
    KOutOfRange { k: usize, max: usize },

    #[error("negative edge weight {0}")]
    NegativeWeight(f64),

    #[error("matrix is not symmetric (max asymmetry {0:e})")]
    NotSymmetric(f64),

    #[error("eigendecomposition did not converge")]
    NoConvergence,

    #[error("covariance of component {component} is singular after regularization")]
    SingularCovariance { component: usize },

    #[error("empty {0}")]
    Empty(&'static str),
}

pub type Result<T> = core::result::Result<T, Error>;
