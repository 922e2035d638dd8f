use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("invalid expression: {0}")]
    InvalidExpression(String),
    #[error("invalid window: {0}")]
    InvalidWindow(String),
    #[error("point cap exceeded: {points} points > cap {cap}")]
    PointCap { points: usize, cap: usize },
    #[error("invalid seminorm spec: {0}")]
    InvalidSpec(String),
    #[error("too few ladder rungs: {0} (need at least 3)")]
    TooFewRungs(usize),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("no limit: {0}")]
    NoLimit(String),
    #[error("quadrature failure: {0}")]
    Quadrature(String),
    #[error("unsupported dimension: {0}")]
    UnsupportedDimension(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("unknown check id: {0}")]
    UnknownCheck(String),
    #[error("malformed case: {0}")]
    MalformedCase(String),
    #[error("malformed report: {0}")]
    MalformedReport(String),
    #[error("config error: {0}")]
    Config(String),
    #[error("io error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;
