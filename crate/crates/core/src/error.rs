use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid invariant factors {0:?}: every factor must be at least 2")]
    InvalidFactors(Vec<u64>),
    #[error("element {element:?} does not belong to group {group:?}")]
    WrongGroup { element: Vec<u64>, group: Vec<u64> },
    #[error("invalid group order {0}")]
    InvalidOrder(u64),
    #[error("{what} of size {size} exceeds the bound {bound}")]
    TooLarge { what: &'static str, size: u64, bound: u64 },
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("sets {0} and {1} are not disjoint")]
    NotDisjoint(usize, usize),
    #[error("invalid family: {0}")]
    InvalidFamily(String),
    #[error("not applicable: {0}")]
    NotApplicable(String),
    #[error("hypothesis violated: {0}")]
    HypothesisViolation(String),
    #[error("family is not liftable: {0}")]
    NotLiftable(String),
    #[error("{q} and {r} are not both odd prime powers", q = .0, r = .0 + 2)]
    NotTwinPrimePowers(u64),
    #[error("not constructible: {0}")]
    NotConstructible(String),
    #[error("empty scan range: c_max {c_max} <= c_min {c_min}")]
    EmptyRange { c_min: f64, c_max: f64 },
    #[error("rejected before search: {0}")]
    RejectedBeforeSearch(String),
    #[error("unknown format {0:?}")]
    UnknownFormat(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("malformed input: {0}")]
    Parse(String),
}
