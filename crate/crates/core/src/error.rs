use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("division by zero")]
    DivisionByZero,
    #[error("square root of negative integer")]
    NegativeSqrt,
    #[error("parse error at {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("polynomial is not univariate in {0}")]
    NotUnivariate(String),
    #[error("zero polynomial has no finite root set")]
    ZeroPolynomial,
    #[error("invalid input: {0}")]
    Input(String),
    #[error("missing sequence entry A_{0}")]
    MissingEntry(u64),
    #[error("value f({0}) is outside the family domain")]
    OutOfDomain(u64),
    #[error("sign given for representable n = {0}; the sign there is forced positive")]
    SignAtRepresentable(u64),
    #[error("ledger record {label}: {msg}")]
    Ledger { label: String, msg: String },
    #[error("certificate step {step}: {msg}")]
    Certificate { step: String, msg: String },
    #[error("classification failed: {0}")]
    Classification(String),
}

impl Error {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }
}
