use thiserror::Error;

/// Errors raised by the library operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("subspace is not a member of the {0}")]
    NotAMember(&'static str),

    #[error("invalid lattice: {0}")]
    InvalidLattice(String),

    #[error("invalid nest: {0}")]
    InvalidNest(String),

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("matrix is singular")]
    Singular,

    #[error("witness search exhausted after {attempts} candidates")]
    SearchExhausted { attempts: usize },

    #[error("cannot parse scalar {0:?}")]
    ParseScalar(String),

    #[error("field mismatch: {0}")]
    Field(String),

    #[error("operator is not a member of the module")]
    NotInModule,

    #[error("internal invariant violated: {0}")]
    Invariant(String),

    #[error("malformed input: {0}")]
    Malformed(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}
