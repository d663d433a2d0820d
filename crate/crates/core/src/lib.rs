//! Exact enumeration formulas, generating functions and streaming sketches
//! from the early analysis-of-algorithms literature, each paired with an
//! independent oracle (brute force, dynamic programming or simulation).
//!
//! Everything that is provable in rationals is computed in rationals
//! ([`BigRat`], or the cheaper [`numerics::Dyadic`] when all denominators
//! are powers of two). Real-valued constants take an explicit tolerance and
//! truncate infinite sums and products with certified tail bounds.
//!
//! Modules:
//!
//! - [`numerics`]: rationals, binomials, harmonic numbers, `(1/2;1/2)_n`,
//!   truncated power series in one and two variables, real special functions.
//! - [`register`]: Horton–Strahler (register) numbers of binary trees.
//! - [`counter`]: Morris approximate counting.
//! - [`fm`]: Flajolet–Martin probabilistic counting and Thue–Morse sums.
//! - [`dst`]: endnodes of digital search trees.
//! - [`slices`]: level-number sequences and the adding-a-slice construction.
//! - [`sums`]: alternating binomial sums, harmonic/Euler sums, Ramanujan's Q and R.
//! - [`digits`]: binary digit sums, Gray code, Mellin–Perron checks.
//! - [`sim`]: fair-bit sources and seeded, batch-parallel simulation.

pub mod counter;
pub mod digits;
pub mod dst;
mod error;
pub mod fm;
pub mod numerics;
pub mod register;
pub mod sim;
pub mod slices;
pub mod sums;

pub use error::{Error, Result};
pub use numerics::BigRat;
