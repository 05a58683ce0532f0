use alloc::boxed::Box;
use core::fmt;

/// Errors raised by the special functions, the root finder, the physical
/// model and the shooting oracle.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the supported domain.
    Domain { what: &'static str, value: f64 },
    /// Gamma evaluated at a non-positive integer.
    Pole { x: f64 },
    /// The result does not fit in an `f64`.
    Overflow { what: &'static str },
    /// An iteration did not converge within its budget.
    NonConvergence { what: &'static str, iterations: usize },
    /// A search reached its limit (an order cap, or an energy ceiling)
    /// before finding enough levels.
    WindowExhausted { found: usize, wanted: usize, limit: f64 },
    /// A matching amplitude vanished, so the coefficients are undetermined.
    Degenerate { nu: f64 },
    /// The wavefunction is not negligible at the edge of the quadrature domain.
    Tail { halfwidth: f64, ratio: f64 },
    /// The shooting integration could not keep the solution representable.
    Step { x: f64 },
    /// A bracket does not enclose a sign change.
    InvalidBracket { nu_lo: f64, nu_hi: f64 },
    /// An evaluation failed at a particular order during a scan.
    AtOrder { nu: f64, source: Box<Error> },
}

pub type Result<T> = core::result::Result<T, Error>;

impl Error {
    /// The innermost error, with any [`Error::AtOrder`] wrappers removed.
    pub fn root_cause(&self) -> &Error {
        match self {
            Error::AtOrder { source, .. } => source.root_cause(),
            other => other,
        }
    }

    pub(crate) fn at_order(self, nu: f64) -> Error {
        match self {
            e @ Error::AtOrder { .. } => e,
            e => Error::AtOrder { nu, source: Box::new(e) },
        }
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain { what, value } => write!(f, "{what} out of domain: {value}"),
            Error::Pole { x } => write!(f, "gamma has a pole at {x}"),
            Error::Overflow { what } => write!(f, "{what} overflows"),
            Error::NonConvergence { what, iterations } => {
                write!(f, "{what} did not converge after {iterations} iterations")
            }
            Error::WindowExhausted { found, wanted, limit } => {
                write!(f, "found {found} of {wanted} levels before reaching the search limit {limit}")
            }
            Error::Degenerate { nu } => {
                write!(f, "matching amplitude vanishes at nu = {nu}; coefficients undetermined")
            }
            Error::Tail { halfwidth, ratio } => {
                write!(f, "wavefunction tail at halfwidth {halfwidth} is {ratio:e} of the peak")
            }
            Error::Step { x } => write!(f, "shooting solution not representable at x = {x}"),
            Error::InvalidBracket { nu_lo, nu_hi } => {
                write!(f, "[{nu_lo}, {nu_hi}] does not bracket a sign change")
            }
            Error::AtOrder { nu, source } => write!(f, "at nu = {nu}: {source}"),
        }
    }
}

impl core::error::Error for Error {}
