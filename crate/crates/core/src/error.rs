use thiserror::Error;

use crate::lattice::AncillaId;

#[derive(Debug, Error)]
pub enum Error {
    #[error("code distance must be odd and in 3..=25, got {0}")]
    InvalidDistance(usize),

    #[error("unknown ancilla {0:?}")]
    UnknownAncilla(AncillaId),

    #[error("invalid circuit location: {0}")]
    InvalidLocation(String),

    #[error("noise rate out of range: {0}")]
    InvalidRate(String),

    #[error("unclassifiable fault: {0}")]
    Unclassifiable(String),

    #[error("pipeline stage {stage} has conflicting primitives on slot {slot}")]
    StageConflict { stage: String, slot: String },

    #[error("coverage violation: {0}")]
    Coverage(String),

    #[error("graph is disconnected: {0}")]
    Disconnected(String),

    #[error("too many defects for exhaustive matching: {0} (max {1})")]
    TooManyDefects(usize, usize),

    #[error("malformed detector record: {0}")]
    Format(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
