use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("syntax error at {line}:{col}: {message}")]
    Syntax {
        line: usize,
        col: usize,
        message: String,
    },

    #[error("unknown gate `{0}`")]
    UnknownGate(String),

    #[error("operand {index} out of range (register width {width})")]
    OperandOutOfRange { index: usize, width: usize },

    #[error("gate `{gate}` applied to qubit {qubit} more than once")]
    DuplicateOperand { gate: String, qubit: usize },

    #[error("gate `{gate}` expects {expected} {what}, got {got}")]
    Arity {
        gate: String,
        what: &'static str,
        expected: usize,
        got: usize,
    },

    #[error("circuit has {qubits} qubits, simulator budget is {budget}")]
    QubitBudget { qubits: usize, budget: usize },

    #[error("circuit has no measurements")]
    NoMeasurements,

    #[error("position {position} out of range for {total} positions")]
    PositionOutOfRange { position: usize, total: usize },

    #[error("inconsistent mutant: {0}")]
    InconsistentMutant(String),

    #[error("empty distribution")]
    EmptyDistribution,

    #[error("classical width mismatch: expected {expected}, observed {observed}")]
    WidthMismatch { expected: usize, observed: usize },

    #[error("observed outcome `{0}` missing from expected distribution")]
    UnexpectedOutcome(String),

    #[error("correlation undefined: {0}")]
    UndefinedCorrelation(String),

    #[error("unknown independent variable `{0}`")]
    UnknownVariable(String),

    #[error("no circuits: {0}")]
    NoCircuits(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
