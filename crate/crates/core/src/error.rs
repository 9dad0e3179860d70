use thiserror::Error;

use crate::dsl::ParseError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid system: {}", .0.join("; "))]
    InvalidSystem(Vec<String>),
    #[error("vertices X{from} and X{to} lie in different weak components")]
    VerticesDisconnected { from: usize, to: usize },
    #[error("dimension mismatch: expected length {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("matrix has {cols} columns, above the search cap of {cap}")]
    ColumnBudgetExceeded { cols: usize, cap: usize },
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("{0}")]
    Domain(String),
    #[error("vector does not solve the associated linear system (cycle row {row})")]
    NotASolution { row: usize },
    #[error("system still contains an identity equation (edge {edge})")]
    NotNormalized { edge: usize },
    #[error("restriction unsupported: {0}")]
    RestrictionUnsupported(String),
    #[error(transparent)]
    Parse(#[from] ParseError),
}
