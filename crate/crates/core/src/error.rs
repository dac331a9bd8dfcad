use thiserror::Error;

/// Errors raised by jet algebra, classification and scanning.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("scalar backends differ: {0} vs {1}")]
    BackendMismatch(&'static str, &'static str),

    #[error("monomial x^{i} y^{j} exceeds jet order {order}")]
    DegreeExceedsOrder { i: u32, j: u32, order: u32 },

    #[error("requested order {requested} exceeds available order {available}")]
    OrderTooHigh { requested: u32, available: u32 },

    #[error("jet order must be at least 1")]
    ZeroOrder,

    #[error("diffeomorphism jet has a nonzero constant term")]
    MovesOrigin,

    #[error("linear part is singular")]
    SingularLinearPart,

    #[error("germ has a nonzero constant term")]
    NonZeroConstant,

    #[error("linear part is not of class {expected}")]
    WrongLinearClass { expected: &'static str },

    #[error("jet order {have} too low, need at least {need}")]
    InsufficientOrder { have: u32, need: u32 },

    #[error("rotation frequency sqrt({0}) is not rational")]
    IrrationalFrequency(String),

    #[error("exact backend required: {0}")]
    ExactRequired(&'static str),

    #[error("non-finite floating point value")]
    NonFinite,

    #[error("malformed number {0:?}")]
    MalformedNumber(String),

    #[error("i/o failure: {0}")]
    Io(String),

    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
