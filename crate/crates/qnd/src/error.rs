use thiserror::Error;

/// Errors produced by model construction, validation, and the checkers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("{context}: expected dimension {expected}, found {found}")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("{context}: matrix must be square, found {rows}x{cols}")]
    NotSquare {
        context: &'static str,
        rows: usize,
        cols: usize,
    },

    #[error("matrix is not Hermitian (max |M - M\u{2020}| = {deviation:.3e})")]
    NotHermitian { deviation: f64 },

    #[error("matrix is not unitary (max |M\u{2020}M - I| = {deviation:.3e})")]
    NotUnitary { deviation: f64 },

    #[error("{context}: entries must be finite")]
    NonFinite { context: &'static str },

    #[error("state vector has (near-)zero norm and cannot be normalized")]
    ZeroNorm,

    #[error("dimension {dim} exceeds the supported maximum of {max} per factor space")]
    DimensionTooLarge { dim: usize, max: usize },

    #[error("outcome {outcome} has probability {probability:.3e}, below the collapse threshold")]
    ImpossibleOutcome { outcome: usize, probability: f64 },

    #[error("{0}")]
    Domain(String),

    #[error("probe design for the weak target requires a measured system state")]
    MissingMeasuredState,

    #[error(
        "implication chain violated: {stronger} passes at {tolerance:.3e} but {weaker} violates \
         by {violation:.3e}; this indicates an internal inconsistency"
    )]
    ImplicationBroken {
        stronger: &'static str,
        weaker: &'static str,
        violation: f64,
        tolerance: f64,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
