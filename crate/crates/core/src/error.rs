use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("unsupported Gauss-Legendre order {0} (supported: 1..=16)")]
    UnsupportedQuadratureOrder(usize),

    #[error("unsupported {family} basis order {order}")]
    UnsupportedBasisOrder { family: &'static str, order: usize },

    #[error("parent coordinate {0} outside [-1, 1]")]
    OutOfParentDomain(f64),

    #[error("parametric coordinate {value} outside [{lo}, {hi}]")]
    OutOfParametricDomain { value: f64, lo: f64, hi: f64 },

    #[error("invalid knot vector: {0}")]
    InvalidKnotVector(String),

    #[error("geometry error: {0}")]
    Geometry(String),

    #[error("point {point:?} outside the mesh box [{lo}, {hi}]^3")]
    OutOfDomain { point: [f64; 3], lo: f64, hi: f64 },

    #[error("assembly error: {0}")]
    Assembly(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("non-finite value encountered at CG iteration {iteration}")]
    NumericalBreakdown { iteration: usize },

    #[error("diagonal scaling needs a positive diagonal; row {row} has {value}")]
    Preconditioner { row: usize, value: f64 },

    #[error("factorization needs {required} stored entries, above the limit of {limit}; use a smaller mesh")]
    SizeLimit { required: usize, limit: usize },

    #[error("invalid configuration: {0}")]
    Config(String),
}
