use thiserror::Error;

use crate::types::{CellVariant, OperationKind};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LimError {
    #[error("invalid width: {0}")]
    InvalidWidth(String),

    #[error("index {index} out of range (length {len})")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("width mismatch: expected {expected}, got {got}")]
    WidthMismatch { expected: usize, got: usize },

    #[error("{op} is not supported by {variant}")]
    UnsupportedOperation {
        variant: CellVariant,
        op: OperationKind,
    },

    #[error("candidate set is empty")]
    EmptySet,

    #[error("no calibration for {variant} {op} at size {size}")]
    UncalibratedPoint {
        variant: CellVariant,
        op: OperationKind,
        size: usize,
    },

    #[error("energy-delay product must be positive, got {0}")]
    NonPositiveEdp(f64),

    #[error("scaling hook is not monotone in size for {variant} {op}: {detail}")]
    NonMonotoneScaling {
        variant: CellVariant,
        op: OperationKind,
        detail: String,
    },

    #[error("geometry {rows}x{cols} is not aligned to 32-bit blocks")]
    GeometryNotBlockAligned { rows: usize, cols: usize },

    #[error("primitive library has no subcircuit for {0}")]
    MissingPrimitive(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, LimError>;
