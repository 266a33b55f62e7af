//! Crate-wide error type.

use std::fmt;

/// Errors surfaced by the library. Variants mirror the failure modes of the
/// individual operations; see the module docs for which operation raises
/// which variant.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Series inversion requires a nonzero linear coefficient.
    ZeroLinearTerm,
    /// No k-th root of the leading coefficient exists in the working
    /// coefficient domain (callers may retry with complex coefficients).
    LeadingRootUnavailable,
    /// `series_right_root` called with a series whose order differs from `k`.
    OrderMismatch { expected: u32, found: i64 },
    /// Branch coefficients leave Q(w); the caller should switch to the
    /// complex-coefficient path.
    ExtensionRequired(String),
    /// A polynomial root solver failed to converge.
    RootFindingFailure(String),
    /// Symbolic construction would exceed the configured degree cap.
    DegreeCapExceeded { requested: u64, cap: u64 },
    /// A resultant vanished identically: the inputs share a component.
    ZeroResultant,
    /// An elimination detected a positive-dimensional common component.
    CurveDetected,
    /// An iteration finished without certifying either outcome.
    Undecided(String),
    /// A numeric evaluation left its guarded domain.
    OutOfDomain(String),
    /// Numeric overflow (escape) reported by complex evaluation.
    Overflow,
    /// Input violated a documented precondition.
    InvalidInput(String),
    /// Truncation budget of a series computation was exhausted.
    PrecisionLoss(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::ZeroLinearTerm => write!(f, "series has zero linear term"),
            Error::LeadingRootUnavailable => {
                write!(f, "leading coefficient has no k-th root in the coefficient domain")
            }
            Error::OrderMismatch { expected, found } => {
                write!(f, "series order mismatch: expected {expected}, found {found}")
            }
            Error::ExtensionRequired(what) => {
                write!(f, "coefficients leave Q(w): {what}")
            }
            Error::RootFindingFailure(what) => write!(f, "root finding failed: {what}"),
            Error::DegreeCapExceeded { requested, cap } => {
                write!(f, "degree {requested} exceeds cap {cap}")
            }
            Error::ZeroResultant => write!(f, "resultant vanishes identically"),
            Error::CurveDetected => write!(f, "inputs share a positive-dimensional component"),
            Error::Undecided(what) => write!(f, "undecided: {what}"),
            Error::OutOfDomain(what) => write!(f, "outside guarded domain: {what}"),
            Error::Overflow => write!(f, "magnitude exceeded the configured escape bound"),
            Error::InvalidInput(what) => write!(f, "invalid input: {what}"),
            Error::PrecisionLoss(what) => write!(f, "series truncation exhausted: {what}"),
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;
