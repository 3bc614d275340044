use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("ragged matrix input: row {row} has {found} entries, expected {expected}")]
    RaggedRows {
        row: usize,
        expected: usize,
        found: usize,
    },

    #[error("matrix is not Hermitian (deviation {0:.3e})")]
    NotHermitian(f64),

    #[error("basis is not orthonormal (deviation {0:.3e})")]
    NonOrthonormalBasis(f64),

    #[error("operation requires the standard matrix-unit basis")]
    WrongBasis,

    #[error("operator bases differ")]
    BasisMismatch,

    #[error("first basis element is not I/sqrt(N) (deviation {0:.3e})")]
    BasisNotUnitFirst(f64),

    #[error("map is not completely positive (eigenvalue {0:.6e})")]
    NotCompletelyPositive(f64),

    #[error("invariant violated: {0}")]
    InvariantViolation(String),

    #[error("propagator is singular (smallest singular value {0:.3e})")]
    SingularPropagator(f64),

    #[error("invalid state: {0}")]
    InvalidState(String),
}

pub type Result<T> = std::result::Result<T, Error>;
