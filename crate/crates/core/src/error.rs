use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension error: {0}")]
    Dimension(String),

    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("index error: {0}")]
    Index(String),

    #[error("degenerate distribution: {0}")]
    DegenerateDistribution(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("sampling error: {0}")]
    Sampling(String),

    #[error("rank error: {0}")]
    Rank(String),

    #[error("config error: {0}")]
    Config(String),

    #[error("every rank in {r_min}..={r_max} produced a degenerate clustering cost")]
    DegenerateCost { r_min: usize, r_max: usize },

    #[error("{}:{line}: {message}", path.display())]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("missing referenced file {}", .0.display())]
    MissingFile(PathBuf),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
