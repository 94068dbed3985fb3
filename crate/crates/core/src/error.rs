use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("non-finite matrix entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("vectors are not orthonormal (Gram deviation {deviation:.3e})")]
    NonOrthonormal { deviation: f64 },

    #[error("incomplete basis: {count} vectors in dimension {dim}")]
    IncompleteBasis { count: usize, dim: usize },

    #[error("operator is not positive semidefinite (min eigenvalue {min_eigenvalue:.3e})")]
    NotPsd { min_eigenvalue: f64 },

    #[error("POVM elements do not sum to identity (deviation {deviation:.3e})")]
    NotCompleteToIdentity { deviation: f64 },

    #[error("matrix is not Hermitian (deviation {deviation:.3e})")]
    NotHermitian { deviation: f64 },

    #[error("invalid density state: {0}")]
    InvalidState(String),

    #[error("bad parameter: {0}")]
    BadParameter(String),

    #[error("bipartite split {d_a}x{d_b} inconsistent with total dimension {total}")]
    BadFactorization { d_a: usize, d_b: usize, total: usize },

    #[error("probability {value} out of range")]
    InvalidProbability { value: f64 },

    #[error("invalid weights: {0}")]
    BadWeights(String),

    #[error("negative vector component {value:.3e} at index {index}")]
    NegativeComponent { index: usize, value: f64 },

    #[error("precondition failed: {0}")]
    PreconditionFailed(String),

    #[error("sequence is not nondecreasing at index {index}")]
    NotMonotone { index: usize },

    #[error("subset size {k} out of range 1..={pool}")]
    KOutOfRange { k: usize, pool: usize },

    #[error("pool of {pool} elements exceeds the exhaustive-enumeration limit {limit}")]
    PoolTooLarge { pool: usize, limit: usize },

    #[error("bad spectrum: {0}")]
    BadSpectrum(String),

    #[error("measurement '{0}' is not a projective basis")]
    NotProjective(String),

    #[error("at least {required} measurement settings required, got {found}")]
    TooFewSettings { required: usize, found: usize },

    #[error("bound must be positive, got {0}")]
    NonPositiveBound(f64),

    #[error("setting count mismatch: {left} vs {right}")]
    SettingCountMismatch { left: usize, right: usize },

    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("dimension {dim} exceeds the limit {limit}")]
    DTooLarge { dim: usize, limit: usize },

    #[error("oracle supports only qubit factors, got dimension {0}")]
    DimTooLarge(usize),

    #[error("grid of {points} points exceeds the limit {limit}")]
    GridTooLarge { points: usize, limit: usize },

    #[error("{count} deterministic strategies exceed the limit {limit}")]
    TooManyStrategies { count: u128, limit: u128 },

    #[error("invalid model: {0}")]
    InvalidModel(String),

    #[error("value out of range: {0}")]
    RangeError(String),
}
