use thiserror::Error;

/// Errors raised by the geometric primitives and the algorithms built on them.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("empty point set")]
    EmptyPointSet,

    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("non-finite coordinate at position {index}")]
    NonFinite { index: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// The minimum-norm-point iteration hit its cap. Carries the best iterate.
    #[error("min-norm point did not converge after {iterations} iterations (gap {gap:e})")]
    NotConverged {
        best: Vec<f64>,
        gap: f64,
        iterations: usize,
    },

    /// Dykstra reached its sweep cap without a nonempty or empty verdict.
    #[error("undecided after {sweeps} sweeps (residual {residual:e}, distance {distance:e})")]
    Undecided {
        sweeps: usize,
        residual: f64,
        distance: f64,
    },

    /// As [`Error::Undecided`], for the intersection of the listed bodies.
    #[error("undecided intersection for bodies {subset:?} (residual {residual:e})")]
    UndecidedSubset { subset: Vec<usize>, residual: f64 },

    #[error("not a Carathéodory instance: set {set} combination is {deviation:e} away from the target")]
    NotCaratheodoryInstance { set: usize, deviation: f64 },

    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),

    #[error("precondition violated by set {set}: {reason}")]
    PreconditionViolated { set: usize, reason: String },

    #[error("enumeration guard exceeded: {what} needs {count} cases, limit is {limit}")]
    GuardExceeded {
        what: &'static str,
        count: u128,
        limit: u128,
    },

    #[error("degenerate simplex (Gram determinant {0:e})")]
    DegenerateSimplex(f64),

    #[error("instance kind mismatch: expected {expected}, found {found}")]
    KindMismatch { expected: String, found: String },

    /// Any of the above, raised while processing the named instance.
    #[error("{instance_ref}: {source}")]
    InInstance { instance_ref: String, source: Box<Error> },

    #[error("io: {0}")]
    Io(String),

    #[error("json: {0}")]
    Json(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
