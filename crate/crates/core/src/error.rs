use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RingError {
    #[error("variable-set mismatch: {left} vs {right} variables")]
    VariableMismatch { left: usize, right: usize },
    #[error("variable index {index} out of range for {nvars} variables")]
    IndexOutOfRange { index: usize, nvars: usize },
    #[error("syntax error at position {position}: {message}")]
    Syntax { position: usize, message: String },
    #[error("unknown variable `{name}` at position {position}")]
    UnknownVariable { name: String, position: usize },
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WeylError {
    #[error("dimension mismatch: {left} vs {right} fiber generators")]
    DimensionMismatch { left: usize, right: usize },
    #[error("division by lam requested on an element with a lam^0 term: {witness}")]
    NotDivisibleByLambda { witness: String },
    #[error("expected a homogeneous element of {what}")]
    NotHomogeneous { what: &'static str },
    #[error(transparent)]
    Ring(#[from] RingError),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GeometryError {
    #[error("geometry has not passed validation")]
    Unvalidated,
    #[error("geometry validation failed:\n{0}")]
    Invalid(String),
    #[error("malformed geometry: {0}")]
    Malformed(String),
    #[error(transparent)]
    Weyl(#[from] WeylError),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FedosovError {
    #[error("truncation order must be at least 2, got {0}")]
    TruncationTooSmall(u32),
    #[error("{what} did not stabilize within {iterations} iterations; the sign convention is inconsistent")]
    ConventionResolution { what: &'static str, iterations: u32 },
    #[error("quantization left residual fiber/form terms: {0}")]
    Residual(String),
    #[error("lam-order {requested} exceeds the guaranteed order {guaranteed}; use trunc >= {required_n}")]
    OrderTooHigh {
        requested: u32,
        guaranteed: u32,
        required_n: u32,
    },
    #[error("leaf function depends on a transversal coordinate: {0}")]
    NotLeafFunction(String),
    #[error("leaf constants must cover indices {expected}, got {got}")]
    LeafArity { expected: usize, got: usize },
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Weyl(#[from] WeylError),
    #[error(transparent)]
    Ring(#[from] RingError),
}
