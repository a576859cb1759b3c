use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error in `{input}`: {message}")]
    Parse { input: String, message: String },

    #[error("variable sets differ: [{left}] vs [{right}]")]
    VariableMismatch { left: String, right: String },

    #[error("unknown variable `{0}`")]
    UnknownVariable(String),

    #[error("too many variables ({0}); at most {max} are supported", max = crate::algebra::MAX_VARS)]
    TooManyVariables(usize),

    #[error("exponent overflow (exponents are limited to 255)")]
    ExponentOverflow,

    #[error("substitution arity mismatch: expected {expected} values, got {got}")]
    Arity { expected: usize, got: usize },

    #[error("zero polynomial not allowed here")]
    ZeroPolynomial,

    #[error("polynomial is not univariate: {0}")]
    NotUnivariate(String),

    #[error("no weight given for variable `{0}`")]
    MissingWeight(String),

    #[error("not invertible: {0}")]
    NotInvertible(String),

    #[error("wrong valuation: expected {expected}, found {found}")]
    Valuation { expected: String, found: String },

    #[error("truncation order {have} too low; at least {needed} required")]
    Truncation { needed: usize, have: usize },

    #[error("not a center candidate: xg(x)>0 fails structurally ({0})")]
    NotCenterCandidate(String),

    #[error("polynomial is not quasi-homogeneous under the given weights: {0}")]
    NotQuasiHomogeneous(String),

    #[error("resource budget exceeded: {0}")]
    BudgetExceeded(String),

    #[error("unknown family `{0}`")]
    UnknownFamily(String),

    #[error("unbound variable `{0}`")]
    UnboundVariable(String),

    #[error("expansion failed: {0}")]
    Expansion(String),

    #[error("malformed system: {0}")]
    MalformedSystem(String),

    #[error("orbit did not close: {0}")]
    OrbitNotClosed(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    pub(crate) fn parse(input: &str, message: impl Into<String>) -> Self {
        Error::Parse {
            input: input.to_string(),
            message: message.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
