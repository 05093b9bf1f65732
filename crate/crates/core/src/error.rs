use thiserror::Error;

/// Errors raised across the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("non-Hermitian input: {0}")]
    NonHermitian(String),

    #[error("resource cap exceeded: {qubits} qubits > cap {cap}")]
    ResourceCap { qubits: usize, cap: usize },

    #[error("index {index} out of range 1..={max}")]
    IndexOutOfRange { index: usize, max: usize },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("gap collapse: degeneracy group straddles the physical/ancilla cut at index {cut}")]
    GapCollapse { cut: usize },

    #[error("degenerate target: coefficient is zero, no gadget needed")]
    DegenerateTarget,

    #[error("overlapping qubit assignment: {0}")]
    OverlappingQubits(String),

    #[error("group size mismatch: {0}")]
    GroupMismatch(String),

    #[error("ladder step {step} did not converge (cost {cost:e})")]
    Unconverged { step: usize, cost: f64, partial: Vec<crate::lro::LadderStep> },

    #[error("report is not converged (cost {cost:e}); refusing to continue")]
    NotConverged { cost: f64 },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
