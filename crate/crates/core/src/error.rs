use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parameter {value} outside the domain [0, 1]")]
    Domain { value: f64 },

    #[error("invalid knot vector: {0}")]
    InvalidKnotVector(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("knot {knot} would exceed multiplicity {max}")]
    MultiplicityExceeded { knot: f64, max: usize },

    #[error("degenerate geometry in patch {patch} at ({u}, {v}): det J = {det:e}")]
    GeometryDegenerate {
        patch: usize,
        u: f64,
        v: f64,
        det: f64,
    },

    #[error("point inversion failed for ({x}, {y}); best residual {residual:e}")]
    InversionFailed { x: f64, y: f64, residual: f64 },

    #[error("coefficient error: {0}")]
    Coefficient(String),

    #[error("matrix is numerically singular at pivot {index}")]
    Singular { index: usize },

    #[error("coupling on interface {interface} is rank deficient")]
    SingularConstraint { interface: usize },

    #[error("matrix is not positive definite (pivot {index})")]
    NotPositiveDefinite { index: usize },

    #[error("eigensolver did not converge after {sweeps} sweeps")]
    EigenFailure { sweeps: usize },

    #[error("invalid domain: {0}")]
    InvalidDomain(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    /// Process exit code used by the command line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Singular { .. }
            | Error::SingularConstraint { .. }
            | Error::NotPositiveDefinite { .. }
            | Error::EigenFailure { .. }
            | Error::InversionFailed { .. }
            | Error::GeometryDegenerate { .. } => 3,
            _ => 2,
        }
    }
}
