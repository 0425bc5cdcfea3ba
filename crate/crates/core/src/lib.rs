//! Exact arithmetic toolkit for conjugacy computations in unitriangular
//! groups `U_n(q)`: finite fields, dense matrices and subspaces, integer
//! partitions, the canonical Jordan-conjugation procedure, gap arrays,
//! exhaustive commuting-pair censuses, lower-central-series commuting
//! probabilities, and the quadratic-irrational inequality checks.
//!
//! Everything is exact: field elements are residues, counts are big
//! integers, probabilities are big rationals, and the `sqrt(2)` constants
//! live in `Q(sqrt 2)`. No floating point anywhere.

pub mod bounds;
pub mod census;
pub mod error;
pub mod field;
pub mod fixtures;
pub mod gaparray;
pub mod jordan;
pub mod lcs;
pub mod matrix;
pub mod partitions;
pub mod verify;

pub use error::{Error, Result};
pub use field::{FieldElement, FieldSpec};
pub use gaparray::GapArray;
pub use jordan::ConjugationTrace;
pub use matrix::{Matrix, Subspace};
pub use partitions::{Partition, RationalVector};
