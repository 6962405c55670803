use alloc::string::String;

/// Errors reported by the labeling schemes, oracles and parsers.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("color {color} is outside the palette of {palette} colors")]
    InvalidFaultSet { color: usize, palette: usize },
    #[error("vertex {vertex} is out of range for a graph with {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("vertex {0} is removed by the fault set")]
    RemovedVertex(usize),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("instance has {n} vertices, limit is {limit}")]
    SizeLimit { n: usize, limit: usize },
    #[error("labels were built with seed {expected}, got {found}")]
    SeedMismatch { expected: u64, found: u64 },
    #[error("label mismatch: {0}")]
    LabelMismatch(&'static str),
    #[error("set {0} of the hitting-set family is empty")]
    EmptySet(usize),
    #[error("invalid witness: {0}")]
    InvalidWitness(String),
    #[error("{target} is unreachable from {from} once color {color} fails")]
    Unreachable { from: usize, target: usize, color: usize },
    #[error("routing exceeded its budget of {0} hops")]
    HopBudget(usize),
    #[error("{0} is only defined for edge-colored graphs")]
    UnsupportedMode(&'static str),
    #[error("bit string has length {found}, expected {expected}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("malformed encoding: {0}")]
    Decode(&'static str),
}

pub type Result<T> = core::result::Result<T, Error>;
