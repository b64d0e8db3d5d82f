use crate::geometry::PointId;
use std::fmt;

/// Axis named in a general-position violation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Axis {
    X,
    Y,
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Axis::X => f.write_str("x"),
            Axis::Y => f.write_str("y"),
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum EnnError {
    #[error("invalid query: {0}")]
    InvalidQuery(String),

    #[error("points {first} and {second} share {axis}-coordinate {value}")]
    GeneralPosition {
        axis: Axis,
        first: PointId,
        second: PointId,
        value: f64,
    },

    #[error("duplicate point id {0}")]
    DuplicateId(PointId),

    #[error("non-finite coordinate for point {0}")]
    NonFinite(PointId),

    #[error("unknown point id {0}")]
    UnknownPoint(PointId),

    /// A mutation or incremental update was applied in a state that does not allow it.
    #[error("state error: {0}")]
    State(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("snapshot version {found} is not supported (expected {expected})")]
    SnapshotVersion { found: u8, expected: u8 },

    #[error("snapshot checksum mismatch")]
    SnapshotChecksum,

    #[error("snapshot is malformed: {0}")]
    SnapshotFormat(String),

    #[error("instance generation failed: {0}")]
    Generation(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = EnnError> = std::result::Result<T, E>;
