//! Error type shared across the crate.

use core::fmt;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Error {
    /// An element index fell outside the universe.
    IndexOutOfRange { index: usize, n: usize },
    /// The operation is not defined for this environment or family.
    Unsupported(&'static str),
    /// Structurally invalid input (overlapping blocks, bad graph, ...).
    Invalid(&'static str),
    /// An operation that needs a regular marginal was given something else.
    NotRegular,
    /// Too few sample profiles for the algorithm's sample budget.
    SampleBudget { needed: usize, got: usize },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::IndexOutOfRange { index, n } => {
                write!(f, "element index {index} out of range for universe of size {n}")
            }
            Error::Unsupported(what) => write!(f, "unsupported operation: {what}"),
            Error::Invalid(what) => write!(f, "invalid input: {what}"),
            Error::NotRegular => write!(f, "marginal is not regular"),
            Error::SampleBudget { needed, got } => {
                write!(f, "algorithm needs {needed} sample profiles, got {got}")
            }
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
