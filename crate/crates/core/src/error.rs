use alloc::string::String;
use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

/// Everything that can go wrong inside the core.
///
/// Variants fall into two groups: physics/precondition failures
/// ([`Error::is_precondition`]) and numerical failures.
#[derive(Clone, Debug, PartialEq)]
pub enum Error {
    /// A parameter is outside its domain.
    InvalidParameter { name: &'static str, reason: String },
    /// A closed-form expression would divide by zero.
    DivisionByZero { quantity: &'static str, denominator: &'static str },
    /// A state and an operator disagree on their labeled basis.
    BasisMismatch { expected: usize, found: usize },
    /// A state vector is not normalized.
    NotNormalized { norm: f64 },
    /// Amplitude outside the span an operation is allowed to act on.
    Precondition(String),
    /// A protocol would push a bosonic mode or the register outside its
    /// truncated space.
    ProtocolViolation(String),
    /// No oscillation to fit.
    FitFailure { contrast: f64 },
    /// Invalid cavity geometry.
    InvalidGeometry { name: &'static str, reason: String },
    /// Eigensolver or other numerical routine did not converge.
    Numerical(String),
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter { name, reason: reason.into() }
    }

    /// True for errors caused by the physics inputs rather than by the
    /// numerics.
    pub fn is_precondition(&self) -> bool {
        !matches!(self, Error::Numerical(_))
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidParameter { name, reason } => {
                write!(f, "invalid parameter `{name}`: {reason}")
            }
            Error::DivisionByZero { quantity, denominator } => {
                write!(f, "cannot evaluate {quantity}: {denominator} is zero")
            }
            Error::BasisMismatch { expected, found } => {
                write!(f, "basis mismatch: operator has {expected} states, state has {found}")
            }
            Error::NotNormalized { norm } => write!(f, "state is not normalized (norm {norm})"),
            Error::Precondition(msg) => write!(f, "precondition violated: {msg}"),
            Error::ProtocolViolation(msg) => write!(f, "protocol violation: {msg}"),
            Error::FitFailure { contrast } => {
                write!(f, "no oscillation detected (contrast {contrast:e})")
            }
            Error::InvalidGeometry { name, reason } => {
                write!(f, "invalid cavity geometry `{name}`: {reason}")
            }
            Error::Numerical(msg) => write!(f, "numerical failure: {msg}"),
        }
    }
}

impl core::error::Error for Error {}
