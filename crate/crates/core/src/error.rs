use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{0}")]
    InvalidInput(String),

    #[error("{0}")]
    InvalidMesh(String),

    #[error("nonconforming mesh: vertex pair ({0}, {1}) is shared by {2} triangles")]
    Nonconforming(usize, usize, usize),

    #[error("degenerate or clockwise triangle {0}")]
    DegenerateTriangle(usize),

    #[error("penalty parameter must be positive, got {0}")]
    InvalidPenalty(f64),

    #[error("unsupported polynomial degree {0}")]
    UnsupportedDegree(usize),

    #[error("unsupported quadrature degree {0} (supported up to {1})")]
    UnsupportedQuadrature(usize, usize),

    #[error("point ({x}, {y}) lies outside element {element}")]
    PointOutsideElement { element: usize, x: f64, y: f64 },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    /// Non-positive pivot or negative curvature. For SIPDG this is the
    /// symptom of a penalty parameter below the coercivity threshold.
    #[error("system matrix is not positive definite ({0}); increase the penalty parameter")]
    Indefinite(String),

    #[error("solver did not converge: {iterations} iterations, relative residual {residual:e}")]
    NotConverged { iterations: usize, residual: f64 },

    #[error("subdomain does not intersect the mesh")]
    EmptySubdomain,

    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Stable machine-readable category, used by the CLI on failure.
    pub fn category(&self) -> &'static str {
        match self {
            Error::InvalidInput(_) | Error::DimensionMismatch { .. } => "invalid-input",
            Error::InvalidMesh(_) | Error::Nonconforming(..) | Error::DegenerateTriangle(_) => {
                "invalid-mesh"
            }
            Error::InvalidPenalty(_) => "invalid-penalty",
            Error::UnsupportedDegree(_) | Error::UnsupportedQuadrature(..) => "unsupported",
            Error::PointOutsideElement { .. } => "outside-element",
            Error::Indefinite(_) => "penalty-too-small",
            Error::NotConverged { .. } => "not-converged",
            Error::EmptySubdomain => "empty-subdomain",
            Error::Parse { .. } => "parse",
            Error::Io(_) => "io",
        }
    }
}
