use std::io;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error(transparent)]
    Io(#[from] io::Error),

    #[error("PLY: {0}")]
    Ply(String),

    #[error("bitstream: {0}")]
    Bitstream(String),

    #[error("geometry: {0}")]
    Geometry(String),

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("eigensolver did not converge after {sweeps} sweeps (off-diagonal norm {off_norm:e})")]
    NoConvergence { sweeps: usize, off_norm: f64 },

    #[error("empty point cloud")]
    EmptyCloud,

    #[error("duplicate vertex position {0:?}")]
    DuplicatePosition([u32; 3]),

    #[error("index {index} out of range for depth {depth}")]
    IndexOutOfRange { index: u32, depth: u8 },

    #[error("rice escape value {0} does not fit in 32 bits")]
    EscapeOverflow(u64),
}

/// Broad failure class, used for process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    Usage,
    Io,
    Format,
    Codec,
}

impl ErrorClass {
    pub fn exit_code(self) -> i32 {
        match self {
            ErrorClass::Usage => 1,
            ErrorClass::Io => 2,
            ErrorClass::Format => 3,
            ErrorClass::Codec => 4,
        }
    }
}

impl Error {
    pub fn class(&self) -> ErrorClass {
        match self {
            Error::InvalidParams(_) => ErrorClass::Usage,
            Error::Io(_) => ErrorClass::Io,
            Error::Ply(_) | Error::Bitstream(_) | Error::Geometry(_) => ErrorClass::Format,
            Error::DimensionMismatch { .. }
            | Error::NoConvergence { .. }
            | Error::EmptyCloud
            | Error::DuplicatePosition(_)
            | Error::IndexOutOfRange { .. }
            | Error::EscapeOverflow(_) => ErrorClass::Codec,
        }
    }
}
