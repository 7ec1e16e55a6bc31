//! Executable combinatorics of pattern-avoiding sorting: forbidden 0-1
//! matrix patterns, instrumented Greedy and SmoothHeap touch matrices,
//! Davenport-Schinzel style lower-bound sequences, extremal search and the
//! numeric side of the upper-bound recurrences.

pub mod ackermann;
pub mod blocked;
pub mod bounds;
pub mod error;
pub mod extremal;
pub mod matrix;
mod mst;
pub mod perm;

pub use error::{Error, Result};
pub use matrix::{contains, contains_trimmed, trim, BitMatrix01, Matcher, TrimmedPattern};
pub use perm::Permutation;
pub mod greedy;
pub mod smooth;
pub mod touch;

pub use touch::TouchMatrix;

/// Bound formulas evaluated exactly.
pub type Rational = num_rational::BigRational;
/// Bound formulas evaluated in floating point.
pub type Float = f64;
