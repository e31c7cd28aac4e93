use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("graph must have at least one vertex")]
    NoVertices,
    #[error("edge {index} is a self-loop at vertex {vertex}")]
    SelfLoop { index: usize, vertex: usize },
    #[error("edge {index} duplicates the pair ({u}, {v})")]
    DuplicateEdge { index: usize, u: usize, v: usize },
    #[error("edge {index} has non-positive weight {weight}")]
    NonPositiveWeight { index: usize, weight: f64 },
    #[error("edge {index} endpoint {vertex} out of range for {num_vertices} vertices")]
    VertexOutOfRange {
        index: usize,
        vertex: usize,
        num_vertices: usize,
    },
    #[error("{weights} weights given for {edges} edges")]
    WeightCountMismatch { weights: usize, edges: usize },
    #[error("vertex {0} does not exist")]
    NoSuchVertex(usize),
    #[error("graph is disconnected")]
    Disconnected,
    #[error("graph is not regular")]
    NotRegular,
    #[error("valency {0} must exceed 2")]
    ValencyTooSmall(usize),
    #[error("generalized operator requires edge weights")]
    MissingWeights,

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("matrix is not real symmetric (max defect {0:e})")]
    NotSymmetric(f64),
    #[error("matrix has a non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },
    #[error("QR iteration did not converge within {sweeps} sweeps ({remaining} eigenvalues left)")]
    NoConvergence { sweeps: usize, remaining: usize },

    #[error("spectral parameter {lambda} is within the pole guard of vertex {vertex}")]
    Pole {
        vertex: usize,
        lambda: num_complex::Complex64,
    },
    #[error("spectral parameter must be real, got {0}")]
    NonRealLambda(num_complex::Complex64),
    #[error("no stationary bond vector: smallest singular value of I - U is {0:e}")]
    NoNullDirection(f64),

    #[error("orbit catalog exceeded {cap} orbits while enumerating length {length}")]
    CatalogCap { cap: usize, length: usize },
    #[error("orbit catalog covers lengths up to {have}, need {need}")]
    CatalogTooShallow { have: usize, need: usize },
    #[error("orbit catalog holds only non-backtracking orbits")]
    CatalogNonBacktrackingOnly,

    #[error("product outside its convergence region (spectral radius {0})")]
    Divergent(f64),
    #[error("invalid probability vector: {0}")]
    InvalidDistribution(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
