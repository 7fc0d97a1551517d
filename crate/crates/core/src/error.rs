use core::fmt;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A scalar argument was outside its admissible range.
    Domain { what: &'static str, value: f64 },
    /// A tabulated profile or grid violated a structural requirement.
    InvalidData(&'static str),
    /// Quadrature or an iterative solve produced a non-finite value.
    NonFinite(&'static str),
    /// A root was requested on an interval without a sign change.
    NoBracket { lo: f64, hi: f64 },
    /// An iteration ran out of budget before meeting its tolerance.
    NoConvergence(&'static str),
    /// Conserved variables admit no physical primitive state.
    Recovery { cell: usize },
    /// A scan exhausted its candidates without success.
    ScanExhausted(&'static str),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain { what, value } => write!(f, "{what} out of range: {value}"),
            Error::InvalidData(msg) => write!(f, "invalid data: {msg}"),
            Error::NonFinite(what) => write!(f, "non-finite value in {what}"),
            Error::NoBracket { lo, hi } => write!(f, "no sign change on [{lo}, {hi}]"),
            Error::NoConvergence(what) => write!(f, "{what} did not converge"),
            Error::Recovery { cell } => write!(f, "primitive recovery failed in cell {cell}"),
            Error::ScanExhausted(what) => write!(f, "{what}: scan exhausted without success"),
        }
    }
}

impl core::error::Error for Error {}

pub(crate) fn ensure(cond: bool, what: &'static str, value: f64) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::Domain { what, value })
    }
}
