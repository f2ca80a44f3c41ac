use thiserror::Error;

/// Errors shared across the crate. Verdict-like outcomes (e.g. a negative
/// proximality scan) are encoded in return types, not here.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is singular or has non-finite entries")]
    SingularMatrix,
    #[error("eigenvalue iteration did not converge within the budget")]
    EigenFailure,
    #[error("exterior power index out of range: k = {0}")]
    BadRank(usize),
    #[error("bad input: {0}")]
    BadInput(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("enumeration budget exceeded (cap {0} elements)")]
    BudgetExceeded(usize),
    #[error("point lies outside the body (margin {0:e})")]
    PointOutside(f64),
    #[error("line through the points meets chart infinity inside the body")]
    DegenerateChart,
    #[error("body is not properly convex: {0}")]
    ImproperBody(String),
    #[error("map does not preserve the body (worst margin {0:e})")]
    NotPreserved(f64),
    #[error("sign lift is inconsistent between samples {0} and {1}")]
    LiftInconsistent(usize, usize),
    #[error("no biproximal element found in the scanned ball")]
    NoProximalElements,
    #[error("no samples supplied")]
    EmptySamples,
    #[error("element is not loxodromic: {0}")]
    NotLoxodromic(String),
    #[error("partition does not sum to the ambient dimension")]
    BadPartition,
    #[error("decay-rate fit did not stabilize: {0}")]
    NonConvergent(String),
    #[error("insufficient data: {0}")]
    InsufficientData(String),
}
