use alloc::string::String;
use core::fmt;

/// Errors reported by the core routines.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Error {
    /// Two objects that must share a dimension do not.
    DimensionMismatch { expected: usize, found: usize },
    /// A matrix that must be invertible is singular.
    SingularMatrix,
    /// A matrix that must be symmetric is not.
    NotSymmetric,
    /// A polynomial that must be a homogeneous cubic is not.
    NotCubicForm,
    /// Enumeration would exceed the configured budget.
    BudgetExceeded { needed: u128, budget: u128 },
    /// A size limit (pencil size, variable count) was exceeded.
    TooLarge { size: usize, limit: usize },
    /// The input violates a documented precondition.
    Precondition(String),
    /// An integer that must be prime is not.
    NotPrime(u64),
}

pub type Result<T> = core::result::Result<T, Error>;

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DimensionMismatch { expected, found } => {
                write!(f, "dimension mismatch: expected {expected}, found {found}")
            }
            Error::SingularMatrix => f.write_str("matrix is singular"),
            Error::NotSymmetric => f.write_str("matrix is not symmetric"),
            Error::NotCubicForm => f.write_str("polynomial is not a homogeneous cubic"),
            Error::BudgetExceeded { needed, budget } => {
                write!(f, "enumeration of {needed} points exceeds budget {budget}")
            }
            Error::TooLarge { size, limit } => write!(f, "size {size} exceeds limit {limit}"),
            Error::Precondition(msg) => write!(f, "precondition violated: {msg}"),
            Error::NotPrime(p) => write!(f, "{p} is not prime"),
        }
    }
}

impl core::error::Error for Error {}

pub(crate) fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}
