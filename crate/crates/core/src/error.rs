use thiserror::Error;

use crate::{BsId, UserId};

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("user {user} at ({x:.1}, {y:.1}) is not covered by any base station")]
    Uncovered { user: UserId, x: f64, y: f64 },

    #[error("user {user} cannot be served by base station {bs}")]
    Infeasible { user: UserId, bs: BsId },

    #[error("user {user}: sub-channel {subchannel} out of range for base station {bs}")]
    SubchannelOutOfRange { user: UserId, bs: BsId, subchannel: usize },

    #[error("traversal refused: {count} candidate associations exceed the limit of {limit}")]
    TraversalTooLarge { count: u128, limit: u128 },

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
