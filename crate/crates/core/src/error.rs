use thiserror::Error;

/// Errors raised across the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid field parameters: {0}")]
    InvalidField(String),

    #[error("polynomial {coeffs:?} is not irreducible over GF({p})")]
    Reducible { p: u32, coeffs: Vec<u32> },

    #[error("inverse of zero")]
    DivisionByZero,

    #[error("operands belong to different field towers")]
    MixedTowers,

    #[error("enumeration of {requested} items exceeds the cap of {cap}")]
    CapExceeded { requested: u128, cap: u64 },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("subspaces live in different ambient spaces or fields")]
    IncompatibleSubspaces,

    #[error("subspaces of dimension {onto} and {along} do not form a direct sum of the {ambient}-dimensional space")]
    NotDirectSum { onto: usize, along: usize, ambient: usize },

    #[error("the zero vector does not define a projective point")]
    ZeroVector,

    #[error(transparent)]
    Parse(#[from] ParseError),

    #[error("invalid linear set spec: {0}")]
    InvalidSpec(String),

    #[error("declared rank {declared} differs from the computed rank {computed}")]
    RankMismatch { declared: usize, computed: usize },

    #[error("internal invariant violated: {0}")]
    Invariant(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

/// A syntax error in a coordinate expression.
///
/// Coordinates of a spec are read like the lines of a file: `line` is the
/// 1-based position of the expression in the `coords` list (1 for a lone
/// expression) and `column` is the 1-based character offset.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {column}: {message} (near `{token}`)")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub token: String,
    pub message: String,
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
