use thiserror::Error;

#[derive(Debug, Error)]
pub enum XrmError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("empty dataset")]
    EmptyInput,

    #[error("labels must take exactly two distinct values, observed {observed:?}")]
    Labels { observed: Vec<f64> },

    #[error("invalid dataset: {0}")]
    InvalidData(String),

    #[error("invalid split: {0}")]
    Split(String),

    #[error("dimension mismatch: {context} (expected {expected}, found {found})")]
    Dimension {
        context: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("solver diverged at iteration {iteration}: non-finite {what}")]
    Diverged {
        iteration: usize,
        what: &'static str,
    },

    #[error("Cholesky factorization failed at pivot {pivot}")]
    Factorization { pivot: usize },

    #[error("model file: {0}")]
    ModelFormat(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, XrmError>;
