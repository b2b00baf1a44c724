use alloc::string::String;
use core::fmt;

use crate::exponent::Degree;

/// Errors shared by every module of the crate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Error {
    DivisionByZero,
    /// The available terms cannot decide the requested quantity. `needed` is
    /// the cutoff (on the exponent axis) at which the decision became
    /// impossible.
    PrecisionExhausted { needed: Degree },
    /// A term or step budget ran out before an answer was reached.
    BudgetExhausted { budget: usize },
    /// A stream produced a non-decreasing exponent.
    NonDecreasing { index: usize },
    NoSquareRoot,
    /// A matrix that is not invertible was used as a group element.
    InvalidElement,
    /// Argument outside the operation's domain.
    Domain(String),
    /// An independently computed cross-check disagreed with the main result.
    Mismatch(String),
    Parse { position: usize, message: String },
}

impl Error {
    pub fn is_exhaustion(&self) -> bool {
        matches!(
            self,
            Error::PrecisionExhausted { .. } | Error::BudgetExhausted { .. }
        )
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DivisionByZero => f.write_str("division by zero"),
            Error::PrecisionExhausted { needed } => {
                write!(f, "precision exhausted (undecided at cutoff {})", needed)
            }
            Error::BudgetExhausted { budget } => write!(f, "budget of {} exhausted", budget),
            Error::NonDecreasing { index } => {
                write!(f, "stream exponents fail to decrease at term {}", index)
            }
            Error::NoSquareRoot => f.write_str("leading coefficient has no square root"),
            Error::InvalidElement => f.write_str("singular matrix is not a group element"),
            Error::Domain(m) => write!(f, "domain error: {}", m),
            Error::Mismatch(m) => write!(f, "cross-check mismatch: {}", m),
            Error::Parse { position, message } => {
                write!(f, "syntax error at {}: {}", position, message)
            }
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T, E = Error> = core::result::Result<T, E>;
