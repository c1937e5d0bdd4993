//! High-precision q-series machinery: coefficient generation and certified
//! evaluation for a family of Ramanujan-type entire functions and
//! polynomials, zero location with realness certification, total-positivity
//! (Pólya frequency) checks, and grid-based verification suites over the
//! families' parameter spaces.
//!
//! Everything runs at a configurable mantissa precision
//! ([`precision::PrecisionContext`], default 256 bits) with explicit error
//! budgets: series evaluations carry truncation certificates, zero sets
//! carry residuals and realness verdicts, and verification reports are
//! deterministic byte-for-byte given the same grid, seed, and precision.

pub mod complex;
pub mod error;
pub mod pf;
pub mod precision;
pub mod qpoch;
pub mod real;
pub mod roots;
pub mod series;
pub mod verify;

pub use complex::Cplx;
pub use error::{Error, Result};
pub use precision::PrecisionContext;
pub use real::Real;
