//! Exact arithmetic for Slavnov products of the open Temperley-Lieb chain,
//! the KP tau functions built from them, and the identities relating the two.
//!
//! Scalars are generic over [`Field`]: exact rationals, a quadratic extension
//! `ℚ(√d)`, or 192-bit floats (real or complex).

pub mod bethe;
pub mod chain;
pub mod diagrams;
pub mod error;
pub mod field;
pub mod instances;
pub mod matrix;
pub mod miwa;
pub mod schur;
pub mod series;
pub mod tau;

pub use bethe::{solve_bethe, BetheSolution};
pub use chain::{ChainParams, Family, ParameterVector, QBranch};
pub use diagrams::{count_closed, enumerate_admissible, parity_admissible, CountRow};
pub use error::{Error, Result};
pub use field::{CFloat, Field, FieldMode, Float, Quadratic, Rational, RingElement};
pub use matrix::{vandermonde, SquareMatrix};
pub use miwa::{MiwaPolynomial, MiwaTimes, Monomial};
pub use schur::{Partition, SchurCoeffMap};
pub use series::LaurentSeries;
