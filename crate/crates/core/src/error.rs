//! Crate-wide error type.

use std::fmt;
use std::io;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug)]
pub enum Error {
    /// A value fell outside the range `1..=limit` supported by an operation.
    OutOfRange { n: u64, limit: u64 },
    /// A table limit of zero was requested.
    InvalidLimit { limit: u64 },
    /// Building a table of this size would exceed the configured memory budget.
    LimitTooLarge {
        limit: u64,
        needed_bytes: u64,
        budget_bytes: u64,
    },
    /// An operation needs exact complexities beyond the table's limit.
    TableTooSmall { needed: u64, limit: u64 },
    /// A verification scan limit is below the minimum the suite requires.
    ScanTooSmall { given: u64, min: u64 },
    /// Table file does not start with the expected magic bytes.
    BadMagic { found: [u8; 4] },
    /// Table file declares an unsupported format version.
    UnsupportedVersion { found: u16 },
    /// Reserved header bytes are nonzero.
    ReservedNonzero { found: u16 },
    /// Table file is shorter than a full header.
    TruncatedHeader { got: usize },
    /// Table file payload is shorter than the declared limit.
    TruncatedPayload { declared: u64, got: u64 },
    /// Table file has bytes beyond the declared payload.
    TrailingData { declared: u64 },
    /// A loaded table entry is inconsistent with the complexity recurrence.
    CorruptTable { n: u64 },
    /// Expression text failed to parse.
    Syntax {
        offset: usize,
        message: &'static str,
    },
    /// A digit base below 2 was requested.
    InvalidBase { base: u64 },
    /// A multiplier range `[lo, hi)` contained no usable candidate.
    EmptyKRange { lo: u64, hi: u64 },
    /// A discrepancy was requested for an empty point set.
    EmptyPointSet,
    /// The exact pairwise discrepancy formula is capped at `max` points.
    TooManyPoints { count: usize, max: usize },
    /// A nonnegative real argument was negative.
    NegativeInput { value: f64 },
    /// An iterative solver failed to reach its tolerance.
    NoConvergence { value: f64 },
    /// An integer argument is below the operation's minimum.
    InputTooSmall { n: String, min: u64 },
    /// A defect sits too close to a class boundary to bin reliably.
    BoundaryAmbiguity { n: u64, defect: f64, boundary: f64 },
    /// A scan over an empty range was requested.
    EmptyScan,
    Io(io::Error),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::OutOfRange { n, limit } => {
                write!(f, "n={n} outside supported range 1..={limit}")
            }
            Error::InvalidLimit { limit } => write!(f, "invalid table limit {limit}"),
            Error::LimitTooLarge {
                limit,
                needed_bytes,
                budget_bytes,
            } => write!(
                f,
                "limit {limit} needs about {needed_bytes} bytes, over the {budget_bytes}-byte budget"
            ),
            Error::TableTooSmall { needed, limit } => write!(
                f,
                "operation needs exact complexities up to {needed}, table stops at {limit}"
            ),
            Error::ScanTooSmall { given, min } => {
                write!(f, "scan limit {given} is below the required minimum {min}")
            }
            Error::BadMagic { found } => write!(
                f,
                "bad magic {:02x}{:02x}{:02x}{:02x}, expected \"ICX1\"",
                found[0], found[1], found[2], found[3]
            ),
            Error::UnsupportedVersion { found } => {
                write!(f, "unsupported table format version {found}")
            }
            Error::ReservedNonzero { found } => {
                write!(f, "reserved header bytes are nonzero ({found:#06x})")
            }
            Error::TruncatedHeader { got } => {
                write!(f, "file too short for a table header ({got} of 16 bytes)")
            }
            Error::TruncatedPayload { declared, got } => write!(
                f,
                "truncated payload: header declares limit {declared} but only {got} bytes follow"
            ),
            Error::TrailingData { declared } => write!(
                f,
                "trailing data after the {declared}-byte payload declared in the header"
            ),
            Error::CorruptTable { n } => write!(
                f,
                "table entry for n={n} breaks the complexity recurrence (corrupt payload?)"
            ),
            Error::Syntax { offset, message } => {
                write!(f, "syntax error at offset {offset}: {message}")
            }
            Error::InvalidBase { base } => write!(f, "digit base must be at least 2, got {base}"),
            Error::EmptyKRange { lo, hi } => {
                write!(f, "multiplier range [{lo}, {hi}) has no usable candidate")
            }
            Error::EmptyPointSet => write!(f, "discrepancy of an empty point set is undefined"),
            Error::TooManyPoints { count, max } => write!(
                f,
                "exact interval discrepancy supports at most {max} points, got {count}"
            ),
            Error::NegativeInput { value } => {
                write!(f, "argument must be nonnegative, got {value}")
            }
            Error::NoConvergence { value } => {
                write!(f, "iteration failed to converge for input {value}")
            }
            Error::InputTooSmall { n, min } => write!(f, "n={n} is below the minimum {min}"),
            Error::BoundaryAmbiguity {
                n,
                defect,
                boundary,
            } => write!(
                f,
                "defect of n={n} ({defect}) lies within 1e-6 of the class boundary {boundary}"
            ),
            Error::EmptyScan => write!(f, "scan range is empty"),
            Error::Io(e) => write!(f, "i/o error: {e}"),
        }
    }
}

impl std::error::Error for Error {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        match self {
            Error::Io(e) => Some(e),
            _ => None,
        }
    }
}

impl From<io::Error> for Error {
    fn from(e: io::Error) -> Self {
        Error::Io(e)
    }
}
