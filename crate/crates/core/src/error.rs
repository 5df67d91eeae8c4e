use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("duplicate point identifier `{0}`")]
    DuplicatePoint(String),
    #[error("unknown point `{0}`")]
    UnknownPoint(String),
    #[error("point index {index} out of range for a carrier of {size} points")]
    IndexOutOfRange { index: usize, size: usize },
    #[error("operands live on different carriers")]
    CarrierMismatch,
    #[error("a principal filter needs a nonempty generator")]
    EmptyGenerator,
    #[error("map table has {got} entries, domain has {expected} points")]
    TableLength { expected: usize, got: usize },
    #[error("projection is not surjective: `{0}` has no preimage")]
    NotSurjective(String),
    #[error("map is not continuous at `{0}`")]
    NotContinuous(String),
    #[error("{what} would have {size} elements, above the limit of {limit}")]
    TooLarge {
        what: &'static str,
        size: u128,
        limit: u128,
    },
    #[error("malformed path: {0}")]
    MalformedPath(String),
    #[error("walk endpoints do not match: {0}")]
    EndpointMismatch(String),
    #[error("family is not a local covering system at `{0}`")]
    NotLocalCover(String),
    #[error("space is not connected")]
    NotConnected,
    #[error("covering atlas defect: {0}")]
    AtlasDefect(String),
    #[error("homotopy move cannot be lifted: {0}")]
    MoveNotLiftable(String),
    #[error("invalid homotopy move: {0}")]
    InvalidMove(String),
    #[error("malformed input: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
