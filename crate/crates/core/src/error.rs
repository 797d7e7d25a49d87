use alloc::string::String;
use core::fmt;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Error {
    UnknownLabel(String),
    Malformed(String),
    Invalid(String),
    /// A configured resource guard was hit.
    Resource { limit: &'static str, needed: u64, allowed: u64 },
    /// The rewriting engine ran out of steps.
    StepBudget { budget: u64 },
    Internal(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::UnknownLabel(l) => write!(f, "unknown label `{l}`"),
            Error::Malformed(m) => write!(f, "malformed input: {m}"),
            Error::Invalid(m) => write!(f, "invalid input: {m}"),
            Error::Resource { limit, needed, allowed } => {
                write!(f, "resource limit `{limit}` exceeded: need {needed}, allowed {allowed}")
            }
            Error::StepBudget { budget } => write!(f, "rewrite step budget of {budget} exhausted"),
            Error::Internal(m) => write!(f, "internal error: {m}"),
        }
    }
}

pub type Result<T> = core::result::Result<T, Error>;

impl core::error::Error for Error {}
