//! Crate-wide error type.

use std::fmt;
use std::io;

/// Errors surfaced by graph construction, file parsing, and the cover builders.
#[derive(Debug)]
pub enum Error {
    /// An edge references a vertex id outside `0..n`.
    VertexOutOfRange { vertex: usize, n: usize },
    /// Self-loops are not representable.
    SelfLoop { vertex: usize },
    /// Edge weights must be positive integers.
    ZeroWeight { tail: usize, head: usize },
    /// A parameter was outside its documented domain.
    InvalidParam(String),
    /// A topological order was requested for a cyclic graph; carries
    /// the vertices of one witness cycle.
    CycleDetected(Vec<usize>),
    /// A requested DAG count exceeds the configured budget.
    BudgetExceeded { required: u128, budget: u128 },
    /// A generated path would leave the grid.
    GeometryOverflow(String),
    /// Simple-path enumeration exceeded the configured cap.
    EnumerationCapExceeded { cap: usize },
    /// A constructed edge contradicts the vertex order it must respect;
    /// indicates a bug in the level decomposition.
    InternalInvariantViolation(String),
    /// Malformed graph/cover/instance file.
    Parse { line: usize, message: String },
    /// Underlying I/O failure.
    Io(io::Error),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::VertexOutOfRange { vertex, n } => {
                write!(f, "vertex id {vertex} out of range (n = {n})")
            }
            Error::SelfLoop { vertex } => write!(f, "self-loop at vertex {vertex}"),
            Error::ZeroWeight { tail, head } => {
                write!(f, "edge ({tail}, {head}) has zero weight; weights must be >= 1")
            }
            Error::InvalidParam(msg) => write!(f, "invalid parameter: {msg}"),
            Error::CycleDetected(cycle) => write!(f, "graph contains a cycle: {cycle:?}"),
            Error::BudgetExceeded { required, budget } => {
                write!(f, "would need {required} DAGs, over the budget of {budget}")
            }
            Error::GeometryOverflow(msg) => write!(f, "path leaves the grid: {msg}"),
            Error::EnumerationCapExceeded { cap } => {
                write!(f, "simple-path enumeration exceeded the cap of {cap}")
            }
            Error::InternalInvariantViolation(msg) => {
                write!(f, "internal invariant violated: {msg}")
            }
            Error::Parse { line, message } => write!(f, "parse error at line {line}: {message}"),
            Error::Io(e) => write!(f, "i/o error: {e}"),
        }
    }
}

impl std::error::Error for Error {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        match self {
            Error::Io(e) => Some(e),
            _ => None,
        }
    }
}

impl From<io::Error> for Error {
    fn from(e: io::Error) -> Self {
        Error::Io(e)
    }
}
