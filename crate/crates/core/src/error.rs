use thiserror::Error;

/// Errors raised anywhere in the engine.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("malformed rational literal {0:?}")]
    MalformedRational(String),
    #[error("zero denominator in {0:?}")]
    ZeroDenominator(String),
    #[error("zero raised to the negative power {0}")]
    ZeroToNegativePower(i64),
    #[error("float precision {0} is below the minimum of 64 bits")]
    PrecisionTooLow(u32),

    #[error("series has a zero constant term and cannot be inverted")]
    ZeroConstantTerm,
    #[error("inner series has a nonzero constant term and the outer series is not a polynomial")]
    NonzeroInnerConstant,
    #[error("coefficient index {index} exceeds series order {order}")]
    IndexOutOfRange { index: usize, order: usize },
    #[error("comparison order {requested} exceeds available order {available}")]
    OrderExceeded { requested: usize, available: usize },

    #[error("base must satisfy 0 < {name} < 1, got {value}")]
    InvalidBase { name: &'static str, value: String },
    #[error("half-integer powers need the base p = q^(1/2), which is unknown for this base")]
    HalfPowerUnavailable,
    #[error("q-binomial coefficient needs k <= n, got n = {n}, k = {k}")]
    BinomialRange { n: u64, k: u64 },

    #[error("hypergeometric series does not terminate within {guard} terms")]
    NonTerminating { guard: usize },
    #[error("denominator parameter vanishes at term {term}")]
    VanishingDenominator { term: usize },
    #[error("conjugate-pair and t-linear parameters are only legal in series mode")]
    SeriesAtomInScalarMode,

    #[error("missing parameter {0:?}")]
    MissingParam(String),
    #[error("parameter {name:?} is invalid: {reason}")]
    InvalidParam { name: String, reason: String },
    #[error("unknown identity {0:?}")]
    UnknownIdentity(String),
    #[error("unknown family {0:?}")]
    UnknownFamily(String),
    #[error("unknown limit check {0:?}")]
    UnknownLimit(String),
    #[error("numeric evaluation failed: {0}")]
    Numeric(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
