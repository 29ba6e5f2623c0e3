use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid degree {0}: must be at least 1")]
    InvalidDegree(usize),
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("shift assignment has {got} entries but the graph has {expected} edges")]
    LengthMismatch { expected: usize, got: usize },
    #[error("invalid shift assignment: {0}")]
    InvalidAssignment(String),
    #[error("root power {power} out of range for k = {k}")]
    RootPowerOutOfRange { power: u32, k: u32 },
    #[error("matrix is not Hermitian (max asymmetry {max_asymmetry:e})")]
    NotHermitian { max_asymmetry: f64 },
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("graph is not regular")]
    NotRegular,
    #[error("graph is not bipartite")]
    NotBipartite,
    #[error("graph is disconnected")]
    Disconnected,
    #[error("work limit exceeded: {what} needs {needed} but the limit is {limit}")]
    WorkLimit { what: &'static str, needed: u128, limit: u128 },
    #[error("polynomial degrees differ: {0} vs {1}")]
    DegreeMismatch(usize, usize),
    #[error("polynomial has no real root")]
    NoRealRoot,
    #[error("invalid polynomial: {0}")]
    InvalidPolynomial(String),
    #[error("polynomial is constant")]
    ConstantPolynomial,
    #[error("eigenvalue iteration did not converge")]
    NoConvergence,
    #[error("invalid budget: {0}")]
    InvalidBudget(String),
    #[error("unsupported lift order {0}")]
    UnsupportedK(u32),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
