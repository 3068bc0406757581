//! Complex symmetry and normality of scalar and 2x2 block Toeplitz operators
//! with band-limited (trigonometric polynomial) symbols.
//!
//! The crate is organized around two independent routes to every verdict:
//! coefficient-level predicates on the symbol, and dense identities on padded
//! finite truncations of the operator. The test suites cross-check the two.

pub mod error;
pub mod gen;
pub mod io;
pub mod normality;
pub mod operator;
pub mod report;
pub mod suite;
pub mod symbol;
pub mod symmetry;

pub use error::{Error, Result};
pub use symbol::{MatrixSymbol, ScalarSymbol, C64, Mat2};
