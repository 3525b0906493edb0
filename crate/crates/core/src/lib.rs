#![no_std]
#![allow(clippy::needless_range_loop)]
//! Exact Novikov-series arithmetic, filtered complexes over Novikov fields,
//! barcodes, cyclic Tate complexes and semisimple structure-constant
//! algebras.
//!
//! Everything is exact: exponents and coefficients are arbitrary-precision
//! rationals or elements of a prime field. Only `alloc` is required.

extern crate alloc;

pub mod barcode;
pub mod equivariant;
pub mod error;
pub mod filtered;
pub mod kpoly;
pub mod linalg;
pub mod polyext;
pub mod qalg;
pub mod ratfunc;
pub mod residue;
pub mod scalar;
pub mod series;

pub use error::{Error, Result};
pub use scalar::{CoefficientField, Scalar};
pub use series::{Division, NovikovSeries, Valuation};
