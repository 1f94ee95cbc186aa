use thiserror::Error;

/// A point of ℝ⁴ (S³ is the unit sphere there).
pub type Point4 = [f64; 4];

#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed input: {0}")]
    MalformedInput(String),
    #[error("contract violation: {0}")]
    ContractViolation(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("not a cocycle: {0}")]
    NotACocycle(String),
    #[error("inconsistent input: {0}")]
    Inconsistent(String),
    #[error("invalid simplicial map: {0}")]
    InvalidMap(String),
    #[error("invalid transition data: {0}")]
    InvalidTransition(String),
    #[error("incomplete connective structure: {0}")]
    IncompleteStructure(String),
    #[error("invalid chart assignment: {0}")]
    InvalidChart(String),
    #[error("simplex {simplex:?} near {near:?} fits in no chart; refine the mesh")]
    Subordination { simplex: Vec<usize>, near: Point4 },
    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
