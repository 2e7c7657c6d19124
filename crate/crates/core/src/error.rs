use thiserror::Error;

use crate::diffring::TableKind;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("generator table mismatch: {left:?} vs {right:?}")]
    TableMismatch { left: TableKind, right: TableKind },

    #[error("generator {symbol} is not available in the {table:?} table")]
    UnsupportedGenerator { symbol: String, table: TableKind },

    #[error("singular point: {0}")]
    Singular(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("sampling exhausted: {0}")]
    Sampling(String),

    #[error("unknown operator `{0}`")]
    UnknownOperator(String),

    #[error("constraint violated: {0}")]
    Constraint(String),

    #[error("{0}")]
    Usage(String),
}
