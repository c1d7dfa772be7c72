use thiserror::Error;

use crate::graph::Fingerprint;

/// Errors raised by the library. Certificate verdicts are not errors; see
/// [`crate::certificate::Verdict`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("vertex {vertex} out of range (n = {n})")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate edge {{{0}, {1}}}")]
    DuplicateEdge(usize, usize),
    #[error("vertex {vertex} has degree {degree}, expected {expected}")]
    NotRegular {
        vertex: usize,
        degree: usize,
        expected: usize,
    },
    #[error("graph is disconnected")]
    Disconnected,
    #[error("fingerprint mismatch: expected {expected}, found {found}")]
    FingerprintMismatch {
        expected: Fingerprint,
        found: Fingerprint,
    },
    #[error("k = {k} out of range {min}..={max}")]
    KOutOfRange { k: usize, min: usize, max: usize },
    #[error("k mismatch: {0} vs {1}")]
    KMismatch(usize, usize),
    #[error("dimension {0} too small")]
    DimensionTooSmall(usize),
    #[error("empty vertex subset")]
    EmptySubset,
    #[error("orientation is not acyclic")]
    NotAcyclic,
    #[error("set #{index} has {size} vertices, need at least {min}")]
    SetTooSmall {
        index: usize,
        size: usize,
        min: usize,
    },
    #[error("duplicate set {0:?}")]
    DuplicateSet(Vec<usize>),
    #[error("set {0:?} repeats a vertex")]
    RepeatedVertex(Vec<usize>),
    #[error("not a k-system: {0}")]
    NotKSystem(String),
    #[error("set #{0} does not induce a cycle")]
    NotCycleSystem(usize),
    #[error("inconsistent transport at vertex {vertex}: omitted neighbor {first} vs {second}")]
    InconsistentTransport {
        vertex: usize,
        first: usize,
        second: usize,
    },
    #[error("not simple: {0}")]
    NotSimple(String),
    #[error("instance has no coordinates")]
    NoCoordinates,
    #[error("degenerate weights: vertices {0} and {1} tie")]
    DegenerateWeights(usize, usize),
    #[error("search space 2^{edges} exceeds budget {budget}")]
    BudgetExceeded { edges: usize, budget: u64 },
    #[error("more than {0} candidate sets")]
    CandidateCapExceeded(usize),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
