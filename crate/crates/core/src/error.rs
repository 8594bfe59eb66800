use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("radicand {0} is not square-free")]
    InvalidRadicand(u64),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("{p} and {q} are not coprime")]
    NotCoprime { p: i64, q: i64 },

    #[error("invalid configuration: {field}: {reason}")]
    InvalidConfig { field: String, reason: String },

    #[error("element acts elliptically on the tree, fixing vertex {fixed}")]
    Elliptic { fixed: String },

    #[error("insufficient ball margin: {0}")]
    InsufficientMargin(String),

    #[error("size cap exceeded: {what} would exceed {cap}")]
    SizeCap { what: String, cap: usize },

    #[error("degenerate geometry: {0}")]
    DegenerateGeometry(String),

    #[error("points are in different natural blocks; use the cross-block geodesic solver")]
    DifferentBlocks,

    #[error("blocks are not adjacent: {0}")]
    NotAdjacent(String),

    #[error("outside the enumerated ball: {0}")]
    OutOfBall(String),

    #[error("model error: {0}")]
    Model(String),
}

pub type Result<T> = std::result::Result<T, Error>;
