//! Nonvanishing polynomial approximation on compact plane sets.
//!
//! Approximates a function continuous on a compact set K (and analytic,
//! nonvanishing in its interior) by polynomials with no zeros on K, and
//! provides a Riemann zeta laboratory: shift scanning, zero counting by the
//! argument principle, and polynomial extraction from zero-free zeta shifts.

pub mod conformal;
pub mod engine;
pub mod error;
pub mod io;
pub mod plot;
pub mod poly;
pub mod region;
pub mod zeta;

pub use error::{Error, Result};
pub use num_complex::Complex64;
