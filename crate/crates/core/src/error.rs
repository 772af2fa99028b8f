//! Error type shared by every module of the crate.

use thiserror::Error;

/// Which side of the CSS code a check belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    X,
    Z,
}

impl std::fmt::Display for Side {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Side::X => write!(f, "X"),
            Side::Z => write!(f, "Z"),
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("entry ({row}, {col}) outside a {rows}x{cols} matrix")]
    IndexOutOfBounds { row: usize, col: usize, rows: usize, cols: usize },
    #[error("duplicate entry ({row}, {col})")]
    DuplicateEntry { row: usize, col: usize },
    #[error("duplicate cell label {label} in grade {grade}")]
    DuplicateLabel { grade: usize, label: String },
    #[error("chain condition violated: d1*d2 has {nonzeros} nonzero entries")]
    ChainConditionViolated { nonzeros: usize },
    #[error("union parts disagree on the boundary of shared cell {cell}")]
    OverlapConflict { cell: String },
    #[error("X-check {x} and Z-check {z} overlap on {overlap} qubits (odd)")]
    AnticommutingChecks { x: usize, z: usize, overlap: usize },
    #[error("{side}-check {index} has empty support")]
    EmptyCheck { side: Side, index: usize },
    #[error("unknown {side}-check {index}")]
    UnknownCheck { side: Side, index: usize },
    #[error("invalid arrangement table: {0}")]
    BadTable(String),
    #[error("unsupported arrangement: {0}")]
    UnsupportedArrangement(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error("graph is not bipartite: {0}")]
    NotBipartite(String),
    #[error("decongestion audit failed: {0}")]
    DecongestionFailure(String),
    #[error("{side} color class {class} has {size} checks, more than the side length {side_len}")]
    ClassTooLarge { side: Side, class: usize, size: usize, side_len: usize },
    #[error("color-route density audit failed: {0}")]
    DensityViolation(String),
    #[error("defect path boundary mismatch: {0}")]
    BoundaryMismatch(String),
    #[error("check layer {layer} keeps {h1} independent cycles")]
    CycleSurvived { layer: String, h1: usize },
    #[error("compatibility identity violated on {nonzeros} entries")]
    CompatibilityViolated { nonzeros: usize },
    #[error("unsupported dimension D={0}")]
    UnsupportedDimension(usize),
    #[error("input chain is not a cycle")]
    NotACycle,
    #[error("syndrome is not in the image of the layer differential")]
    NotInImage,
    #[error("linear solve failed: {0}")]
    SolveFailed(String),
    #[error("enumeration of weight <= {budget} over {n} qubits exceeds the limit")]
    BudgetTooLarge { n: usize, budget: usize },
    #[error("{n} qubits exceed the search limit {limit}")]
    TooLarge { n: usize, limit: usize },
    #[error("malformed bundle: {0}")]
    Bundle(String),
}

pub type Result<T> = std::result::Result<T, Error>;
