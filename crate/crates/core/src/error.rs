use thiserror::Error;

use crate::linalg::LinalgError;
use crate::quiver::Finding;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("invalid quiver datum: {}", describe(.0))]
    InvalidDatum(Vec<Finding>),
    #[error("invalid AJN datum: {0}")]
    InvalidAjn(String),
    #[error("weight is unbalanced: sources give {sources}, sinks give {sinks}")]
    Imbalance { sources: u64, sinks: u64 },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("representation is zero")]
    ZeroRepresentation,
    #[error("sink aggregate M_{sink} is not positive definite")]
    SingularAggregate { sink: usize },
    #[error("update for source {vertex} is singular (nonzero common kernel)")]
    SingularUpdate { vertex: usize },
    #[error("tuple is not extremal: residual {residual:e} exceeds {tol:e}")]
    NotExtremal { residual: f64, tol: f64 },
    #[error("group element block {vertex} is singular")]
    SingularBlock { vertex: String },
    #[error("split is unbalanced: sigma . dim V1 = {0}")]
    SplitImbalance(i64),
    #[error("arrow {arrow} is not upper block triangular for the split")]
    NotTriangular { arrow: usize },
    #[error("invalid split: {0}")]
    InvalidSplit(String),
    #[error("solver did not converge ({0})")]
    NotConverged(String),
}

fn describe(findings: &[Finding]) -> String {
    findings.iter().map(|f| f.to_string()).collect::<Vec<_>>().join("; ")
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
