use num_bigint::BigUint;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("zero has no p-adic valuation")]
    ZeroValuation,
    #[error("{0} is not a prime")]
    NotPrime(BigUint),
    #[error("cannot factor {value}: cofactor {cofactor} is composite with no factor below {bound}")]
    Unfactored {
        value: BigUint,
        cofactor: BigUint,
        bound: u64,
    },
    #[error("cannot parse {what} from {input:?}")]
    Parse { what: &'static str, input: String },
    #[error("[0 : 0] is not a point of P^1")]
    ZeroPoint,
    #[error("denominator polynomial is zero")]
    ZeroDenominator,
    #[error("numerator and denominator share the factor {factor}")]
    CommonFactor { factor: String },
    #[error("constant maps have no dynamics")]
    ConstantMap,
    #[error("maps in a system need degree at least 2, got {0}")]
    DegreeTooSmall(usize),
    #[error("a map system needs at least one map")]
    EmptySystem,
    #[error("letter {letter} is outside 1..={k}")]
    BadLetter { letter: usize, k: usize },
    #[error("cannot shift an empty word")]
    EmptyWord,
    #[error("work limit exceeded: {0}")]
    WorkLimit(String),
    #[error("epsilon must lie in (0, 1], got {0}")]
    InvalidEpsilon(String),
    #[error("canonical height enclosure {0} is not certified positive")]
    NotWandering(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("place set must contain the infinite place")]
    MissingInfinitePlace,
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn parse(what: &'static str, input: &str) -> Error {
        Error::Parse {
            what,
            input: input.to_string(),
        }
    }

    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::WorkLimit(_) => 3,
            Error::Io(_) => 1,
            _ => 2,
        }
    }

    /// Short machine-readable tag for JSON diagnostics.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::ZeroValuation => "zero_valuation",
            Error::NotPrime(_) => "not_prime",
            Error::Unfactored { .. } => "unfactored",
            Error::Parse { .. } => "parse",
            Error::ZeroPoint => "zero_point",
            Error::ZeroDenominator => "zero_denominator",
            Error::CommonFactor { .. } => "common_factor",
            Error::ConstantMap => "constant_map",
            Error::DegreeTooSmall(_) => "degree_too_small",
            Error::EmptySystem => "empty_system",
            Error::BadLetter { .. } => "bad_letter",
            Error::EmptyWord => "empty_word",
            Error::WorkLimit(_) => "work_limit",
            Error::InvalidEpsilon(_) => "invalid_epsilon",
            Error::NotWandering(_) => "not_wandering",
            Error::InvalidParameter(_) => "invalid_parameter",
            Error::MissingInfinitePlace => "missing_infinite_place",
            Error::Config(_) => "config",
            Error::Io(_) => "io",
            Error::Json(_) => "json",
        }
    }
}
