use thiserror::Error;

/// Error type shared by every module in the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("constant row {0}")]
    ConstantRow(usize),

    #[error("non-finite value at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("singular unmixing matrix")]
    SingularMatrix,

    #[error("degenerate copula correlation")]
    DegenerateCopula,

    #[error("rank-deficient maps")]
    RankDeficient,

    #[error("zero-variance input: {0}")]
    ZeroVariance(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("optimization diverged at epoch {epoch}; try a smaller learning_rate")]
    Diverged { epoch: usize },

    #[error("failed to bracket target correlation for component {0}")]
    BracketFailure(usize),

    #[error("retry budget exhausted: {0}")]
    RetriesExhausted(&'static str),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("bad matrix file: {0}")]
    Format(String),

    #[error("config line {line}: {msg}")]
    Config { line: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;
