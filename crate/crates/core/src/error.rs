use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("self-loop on node `{0}` is not allowed")]
    SelfLoop(String),

    #[error("edge {from} -> {to} has non-positive weight {weight}")]
    NonPositiveWeight {
        from: String,
        to: String,
        weight: String,
    },

    #[error("unknown node `{0}`")]
    UnknownNode(String),

    #[error("node id {0} is out of range")]
    UnknownNodeId(usize),

    #[error("misaligned inputs: {left} nodes vs {right} nodes")]
    Misaligned { left: usize, right: usize },

    #[error("power iteration did not converge after {iterations} iterations (last delta {delta})")]
    NotConverged { iterations: usize, delta: f64 },

    #[error("graph has no edges")]
    NoEdges,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

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

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
