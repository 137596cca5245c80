//! Error type shared by every module in the crate.

use crate::matrix::Matrix;

#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    /// Wrong dimensions: ragged rows, non-square input, mismatched sizes.
    #[error("ShapeError: {0}")]
    Shape(String),

    /// A token in an input file could not be parsed.
    #[error("ParseError: line {line}: {message}")]
    Parse { line: usize, message: String },

    /// An edge weight (or matrix entry) is NaN or infinite.
    #[error("BadWeight: non-finite weight {0}")]
    BadWeight(f64),

    /// The same (source, target) pair appeared twice in an edge list.
    #[error("DuplicateEdge: {from} -> {to} listed more than once")]
    DuplicateEdge { from: String, to: String },

    /// A process-matter block matrix has a nonzero entry inside a diagonal block.
    #[error("BlockStructureError: nonzero entry at ({row}, {col}) inside a diagonal block")]
    BlockStructure { row: usize, col: usize },

    /// A vertex index is outside the graph.
    #[error("IndexError: {0}")]
    Index(String),

    /// Parameters fail validation (λ ≤ 0, empty grid, lo ≥ hi, ...).
    #[error("InvalidParams: {0}")]
    InvalidParams(String),

    /// The series hit `max_terms` before the tail bound met the tolerance.
    /// Carries the normalized partial result and the bound that was achieved.
    #[error(
        "TruncationNotConverged: {terms} terms at lambda={lambda}, tail bound {achieved_bound:e} > tolerance"
    )]
    TruncationNotConverged {
        lambda: f64,
        terms: usize,
        achieved_bound: f64,
        partial: Box<Matrix>,
    },

    /// Root refinement was asked for an interval without a sign change.
    #[error("NoBracket: no sign change on [{lo}, {hi}]")]
    NoBracket { lo: f64, hi: f64 },

    /// Eigenvalues have imaginary parts beyond tolerance.
    #[error("NotRealDiagonalizable: largest imaginary eigenvalue magnitude {max_imag:e}")]
    NotRealDiagonalizable { max_imag: f64 },

    /// The eigenbasis is numerically singular or fails to reconstruct the input.
    #[error("IllConditionedBasis: condition estimate {condition:e}")]
    IllConditionedBasis { condition: f64 },

    /// All coefficients of an exponential sum vanish: the two score curves are
    /// identically equal and root isolation is meaningless.
    #[error("DegenerateExpSum: score difference is identically zero")]
    DegenerateExpSum,

    #[error("IoError: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
