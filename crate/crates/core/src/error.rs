use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("unknown field `{0}`")]
    UnknownField(String),

    #[error("invalid parameters for `{field}`: {reason}")]
    InvalidParams { field: String, reason: String },

    #[error("non-finite sample at index {index}")]
    NonFinite { index: usize },

    #[error("raw volume {path}: expected {expected} bytes, found {found}")]
    SizeMismatch {
        path: PathBuf,
        expected: usize,
        found: usize,
    },

    #[error("cannot encode sample {value} at index {index} as {dtype}")]
    Unencodable {
        index: usize,
        value: f64,
        dtype: &'static str,
    },

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),

    /// A hard topological inconsistency while assembling a cell's loops.
    #[error("topology error in cell {cell:?}: {reason}")]
    Topology { cell: [usize; 3], reason: String },

    #[error("degenerate adjoining tangent at loop vertex {vertex} of cell {cell:?}")]
    DegenerateTangent { cell: [usize; 3], vertex: usize },

    #[error("parameter point ({0}, {1}) lies outside the footprint")]
    OutsideFootprint(f64, f64),

    #[error("hermite parameter {0} outside [0, 1]")]
    ParameterOutOfRange(f64),

    #[error("artifact format mismatch: {0}")]
    Format(String),

    #[error("unsupported: {0}")]
    Unsupported(String),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// True for failures caused by inconsistent geometry or artifacts rather
    /// than by bad user input.
    pub fn is_topological(&self) -> bool {
        matches!(
            self,
            Error::Topology { .. } | Error::DegenerateTangent { .. } | Error::Format(_)
        )
    }
}
