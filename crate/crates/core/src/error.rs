//! Crate-wide error type.  Every fallible operation reports a variant that
//! names the violated precondition or internal invariant.

use alloc::string::String;
use core::fmt;

/// Errors raised by group construction, extraction and verification.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// Two vectors (or a vector and an ambient width) disagree in length.
    LengthMismatch { left: usize, right: usize },
    /// A coordinate fell outside the half-open interval `[0, 1)`.
    EntryOutOfRange(String),
    /// A coordinate sum that must be an integer is not.
    NonIntegerHeight(String),
    /// Generator closure exceeded the configured element cap.
    ClosureCapExceeded { cap: usize },
    /// A requested order exceeds the configured cap.
    OrderCapExceeded { order: u64, cap: u64 },
    /// Two elements share a height, so no canonical key exists.
    DuplicateHeights { height: u64 },
    /// The group is not of the required type `(v, k)`.
    NotOfType(String),
    /// The group has an identically-zero coordinate (a lattice pyramid).
    ZeroCoordinate { index: usize },
    /// A vector expected to lie in the group does not.
    NotInGroup(String),
    /// An element fails the admissibility condition for extension.
    NotAdmissible(String),
    /// A parameter violates its documented range.
    BadParameter(String),
    /// A marker step index is not present in the marker set.
    UnknownMarker { step: usize },
    /// No marker subset sums to the requested element.
    NoSubsetDecomposition(String),
    /// The group does not contain exactly one element of height `k`.
    NoUniqueMinimalHeight { k: u64, found: usize },
    /// No coset qualifies for the next tower stage.
    NoQualifyingCoset { stage: usize },
    /// The simplex vertices are affinely dependent.
    DegenerateSimplex,
    /// The simplex dimension exceeds the enumeration cap.
    DimensionCapExceeded { dim: usize, cap: usize },
    /// An internal consistency check failed; the payload names it.
    Inconsistent(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::LengthMismatch { left, right } => {
                write!(f, "length mismatch: {left} vs {right}")
            }
            Error::EntryOutOfRange(what) => write!(f, "entry out of [0,1): {what}"),
            Error::NonIntegerHeight(what) => write!(f, "non-integer height: {what}"),
            Error::ClosureCapExceeded { cap } => {
                write!(f, "generator closure exceeded cap of {cap} elements")
            }
            Error::OrderCapExceeded { order, cap } => {
                write!(f, "group order {order} exceeds cap {cap}")
            }
            Error::DuplicateHeights { height } => {
                write!(f, "two elements share height {height}; no canonical key")
            }
            Error::NotOfType(what) => write!(f, "group is not of the required type: {what}"),
            Error::ZeroCoordinate { index } => {
                write!(
                    f,
                    "coordinate {index} is identically zero (lattice pyramid)"
                )
            }
            Error::NotInGroup(what) => write!(f, "element not in group: {what}"),
            Error::NotAdmissible(what) => write!(f, "element not admissible: {what}"),
            Error::BadParameter(what) => write!(f, "bad parameter: {what}"),
            Error::UnknownMarker { step } => write!(f, "no marker with step index {step}"),
            Error::NoSubsetDecomposition(what) => {
                write!(f, "no marker subset sums to the element: {what}")
            }
            Error::NoUniqueMinimalHeight { k, found } => {
                write!(
                    f,
                    "expected exactly one element of height {k}, found {found}"
                )
            }
            Error::NoQualifyingCoset { stage } => {
                write!(
                    f,
                    "no coset with the required minimum height at stage {stage}"
                )
            }
            Error::DegenerateSimplex => write!(f, "simplex vertices are affinely dependent"),
            Error::DimensionCapExceeded { dim, cap } => {
                write!(f, "dimension {dim} exceeds enumeration cap {cap}")
            }
            Error::Inconsistent(what) => write!(f, "internal consistency failure: {what}"),
        }
    }
}

impl core::error::Error for Error {}

/// Crate-wide result alias.
pub type Result<T> = core::result::Result<T, Error>;
