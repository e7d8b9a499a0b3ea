use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not Hermitian: |M[{row}][{col}] - conj(M[{col}][{row}])| = {deviation:e}")]
    NotHermitian {
        row: usize,
        col: usize,
        deviation: f64,
    },

    #[error("Hermitian eigensolver did not converge")]
    DecompositionFailure,

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix shape {rows}x{cols} does not match {entries} entries")]
    ShapeMismatch {
        rows: usize,
        cols: usize,
        entries: usize,
    },

    #[error("index {index} out of range for spectrum of length {len}")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("state is not normalized: squared norm {norm_sq}")]
    NotNormalized { norm_sq: f64 },

    #[error("invalid density matrix: {0}")]
    InvalidDensityMatrix(String),

    #[error("invalid POVM: {reason} (max deviation {max_deviation:e})")]
    InvalidPovm { reason: String, max_deviation: f64 },

    #[error(
        "outcome {outcome} has probability {probability:e} but derivative {derivative:e}; Fisher term diverges"
    )]
    SingularOutcome {
        outcome: usize,
        probability: f64,
        derivative: f64,
    },

    #[error("readout carries no information about the parameter (Fisher information {fisher:e})")]
    NoSensitivity { fisher: f64 },

    #[error("initial coherence between eigenindices {a1} and {a2} is {magnitude:e}; decoherence is undefined")]
    UndefinedCoherence { a1: usize, a2: usize, magnitude: f64 },

    #[error("generator uncertainty {delta_b:e} is zero; decoherence-free distance is infinite")]
    ZeroUncertainty { delta_b: f64 },

    #[error("meter dimension {dim} is below the minimum of {min}")]
    DimensionTooSmall { dim: usize, min: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("{path}: parse error: {message}")]
    Parse { path: String, message: String },

    #[error("{field}: {source}")]
    Validation {
        field: String,
        #[source]
        source: Box<Error>,
    },

    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn at(self, field: impl Into<String>) -> Self {
        Error::Validation {
            field: field.into(),
            source: Box::new(self),
        }
    }

    /// The innermost error beneath any field-path wrappers.
    pub fn root(&self) -> &Error {
        match self {
            Error::Validation { source, .. } => source.root(),
            e => e,
        }
    }

    /// True for failures caused by malformed or invalid input rather than by
    /// the numerics.
    pub fn is_input_error(&self) -> bool {
        match self {
            Error::DecompositionFailure | Error::SingularOutcome { .. } => false,
            Error::Validation { source, .. } => source.is_input_error(),
            _ => true,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
