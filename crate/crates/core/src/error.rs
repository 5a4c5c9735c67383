use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch in {op}: {left:?} vs {right:?}")]
    DimensionMismatch {
        op: &'static str,
        left: (usize, usize),
        right: (usize, usize),
    },

    #[error("expected a square matrix, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix is singular")]
    Singular,

    #[error("matrix is not unit lower triangular")]
    NotUnitriangular,

    #[error("matrix power {bound} is not zero")]
    NotNilpotent { bound: usize },

    #[error("split point ({i}, {j}) outside a {rows}x{cols} matrix")]
    SplitOutOfRange {
        i: usize,
        j: usize,
        rows: usize,
        cols: usize,
    },

    #[error("permutation of size {perm} applied to dimension {dim}")]
    PermutationSize { perm: usize, dim: usize },

    #[error("not a permutation: {0}")]
    InvalidPermutation(String),

    #[error("boundary condition d(k)*d(k+1) = 0 fails at degree {degree}")]
    BoundaryViolation { degree: i32 },

    #[error("malformed complex: {0}")]
    MalformedComplex(String),

    #[error("upper-left block of the reordered matrix is not unit lower triangular")]
    TriangularityViolation,

    #[error("invalid vector field: {0}")]
    InvalidVectorField(String),

    #[error("decomposition failed: {0}")]
    DecompositionFailure(String),

    #[error("pivot block at degree {degree} is not invertible")]
    NotInvertible { degree: i32 },

    #[error("reduction check failed: {0}")]
    VerificationFailure(String),

    #[error("parse error: {0}")]
    Parse(String),
}
