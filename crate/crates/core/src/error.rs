use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("unsupported format: {0}")]
    Format(String),

    #[error("dims/payload mismatch: header implies {expected} voxels, payload holds {actual}")]
    PayloadSize { expected: usize, actual: usize },

    #[error("mask dims {mask:?} do not match grid dims {grid:?}")]
    Alignment { mask: [usize; 3], grid: [usize; 3] },

    #[error("unknown mask label {0}")]
    UnknownLabel(i64),

    #[error("table error: {0}")]
    Table(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("empty region (label {0})")]
    EmptyRegion(u8),

    #[error("no valid voxel pairs at offset {0:?}")]
    NoValidPairs([i32; 3]),

    #[error("single-class target")]
    SingleClass,

    #[error("no events in survival data")]
    NoEvents,

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("no usable pairs for concordance")]
    NoUsablePairs,
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
