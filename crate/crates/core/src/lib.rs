//! Exact GF(2) toolkit for the BCH family of binary storage codes on
//! triangle-free Cayley graphs over `GF(2^m)^2`.
//!
//! The crate builds the connection sets `{(a, a^n)}`, their Cayley graphs and
//! coset (parity-check) matrices, computes GF(2) ranks with packed Gaussian
//! elimination, counts the carry-free monomials `N_m` that bound those ranks,
//! and certifies unit rate through ranks of sparse polynomials.

pub mod bitmatrix;
pub mod carryfree;
pub mod cayley;
pub mod code;
pub mod error;
pub mod field;
pub mod poly;
pub mod verify;
pub mod zsqrt2;

pub use bitmatrix::{BitMatrix, BitVec, SparseBitMatrix};
pub use cayley::{CayleyGraph, ConnectionSet, FamilyParams};
pub use code::CodeReport;
pub use error::{Error, Result};
pub use field::{FieldElem, FieldSpec};
pub use poly::{CertificationResult, Monomial, SparsePoly};
pub use zsqrt2::Zsqrt2;

/// Crate version, embedded in every CLI report.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
