use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("unknown variable `{0}`")]
    UnknownVariable(String),

    #[error("header error: {0}")]
    Header(String),

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("validation error at row {row}, column `{column}`: {message}")]
    Validation {
        row: usize,
        column: String,
        message: String,
    },

    #[error("dataset has no data rows")]
    EmptyDataset,

    #[error("invalid prior: {0}")]
    Config(String),

    #[error("structure contains a directed cycle through variable {0}")]
    Cyclic(usize),

    #[error("capacity exceeded: {0}")]
    Capacity(String),

    #[error("missing parent-set entry for variable {child}: {parents:?}")]
    MissingEntry { child: usize, parents: Vec<usize> },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}
