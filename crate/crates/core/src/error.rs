use thiserror::Error;

/// Errors raised by oracles, grid transforms and parameter rules.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ProxError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("empty list of functions or parameters")]
    EmptyList,
    #[error("function `{0}` has no subdifferential oracle and no gradient")]
    NoSubdiffOracle(String),
    #[error("function value is +infinity at the query point")]
    EvalInfinite,
    #[error("function `{0}` must be finite-valued on its domain")]
    NotFiniteValued(String),
    #[error("function is +infinity at every grid node")]
    ImproperOnGrid,
    #[error("function `{0}` is not tagged convex")]
    NotConvexTagged(String),
    #[error("function `{0}` is not tagged C1 or C2")]
    NotC1Tagged(String),
    #[error("r = {r} does not exceed the prox-boundedness threshold estimate of `{id}`")]
    ThresholdViolated { id: String, r: f64 },
    #[error("lambda must be positive, got {0}")]
    NonpositiveLambda(f64),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("degenerate box: {0}")]
    DegenerateBox(String),
    #[error("grid is not contained in the domain of `{0}`")]
    GridOutsideDomain(String),
    #[error("invalid certificate: {0}")]
    InvalidCertificate(String),
    #[error("unknown catalog id `{0}`")]
    UnknownFunction(String),
    #[error("function spec error at {location}: {message}")]
    SpecParse { location: String, message: String },
}

pub type Result<T> = std::result::Result<T, ProxError>;
