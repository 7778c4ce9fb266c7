use thiserror::Error;

/// Errors produced by the simulation toolkit.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid target qubits {targets:?}: {reason}")]
    InvalidTarget { targets: Vec<usize>, reason: String },

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("invalid channel: {0}")]
    InvalidChannel(String),

    #[error("invalid gate: {0}")]
    InvalidGate(String),

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("invalid probabilities ({px}, {py}, {pz}): each must be >= 0 and their sum <= 1")]
    InvalidProbability { px: f64, py: f64, pz: f64 },

    #[error("invalid model parameters: {0}")]
    InvalidParams(String),

    #[error("no exact dynamical transition for J = {j} != m = {m}")]
    NoExactDqpt { m: f64, j: f64 },

    #[error("phase undefined at grid point (J index {j_index}, t index {t_index}): echo {echo:e}")]
    UndefinedPhase {
        j_index: usize,
        t_index: usize,
        echo: f64,
    },

    #[error("invalid loop: {0}")]
    InvalidLoop(String),

    #[error("time step must be positive, got {0}")]
    InvalidTimeStep(f64),

    #[error("cannot export gate `{0}` to OpenQASM")]
    UnsupportedGate(String),

    #[error("OpenQASM parse error on line {line}: {message}")]
    QasmParse { line: usize, message: String },

    #[error("missing tomography setting {0}")]
    MissingSetting(String),

    #[error("invalid tomography data: {0}")]
    InvalidTomography(String),

    #[error("time grids differ: {0}")]
    TimeGridMismatch(String),

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("invalid preset `{0}`")]
    InvalidPreset(String),

    #[error("malformed target file: {0}")]
    TargetFormat(String),
}

pub type Result<T> = std::result::Result<T, Error>;
