//! Error type shared across the crate.

use std::fmt;

/// Everything that can go wrong while building or analysing an instance.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// The element list was empty.
    EmptyElements,
    /// An element was zero or negative.
    NonPositiveElement {
        /// Position of the offending element.
        index: usize,
        /// The value found there.
        value: i64,
    },
    /// The element total does not fit the column index type.
    ElementOverflow,
    /// A requested target lies outside `0..=total`.
    TargetOutOfRange {
        /// The requested target sum.
        target: i64,
        /// Sum of all elements, the largest reachable column.
        total: u64,
    },
    /// A subset count exceeded `u64`; counting needs `N < 64`.
    CountOverflow,
    /// Exhaustive enumeration was asked for an instance beyond its size cap.
    InstanceTooLarge {
        /// Number of elements in the instance.
        size: usize,
        /// Largest size the operation accepts.
        max: usize,
    },
    /// A decision was requested but the instance carries no target.
    MissingTarget,
    /// A parameter failed validation; the message names the field.
    InvalidParams(String),
    /// No crossover size exists below the search cap.
    NoCrossover {
        /// Largest instance size that was examined.
        cap: u32,
    },
    /// A probability parameter left the open interval (0, 1).
    ThetaOutOfRange {
        /// The offending value.
        value: f64,
    },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::EmptyElements => write!(f, "instance has no elements"),
            Error::NonPositiveElement { index, value } => {
                write!(f, "element {index} is {value}; elements must be positive integers")
            }
            Error::ElementOverflow => write!(f, "sum of elements overflows the column index"),
            Error::TargetOutOfRange { target, total } => {
                write!(f, "target {target} is outside the reachable range 0..={total}")
            }
            Error::CountOverflow => {
                write!(f, "subset count exceeds u64; instances must have fewer than 64 elements")
            }
            Error::InstanceTooLarge { size, max } => {
                write!(f, "instance has {size} elements; this operation accepts at most {max}")
            }
            Error::MissingTarget => write!(f, "instance has no target sum to decide"),
            Error::InvalidParams(msg) => write!(f, "invalid parameter: {msg}"),
            Error::NoCrossover { cap } => {
                write!(f, "no crossover found for instance sizes up to {cap}")
            }
            Error::ThetaOutOfRange { value } => {
                write!(f, "theta must lie strictly between 0 and 1, got {value}")
            }
        }
    }
}

impl std::error::Error for Error {}
