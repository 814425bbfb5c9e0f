//! Schwarz functions of analytic Jordan curves, the Cauchy and exponential
//! transforms of the domains they bound, and the line bundles on the Riemann
//! sphere whose transition functions are built from the Schwarz function.
//!
//! The crate is `no_std` (it needs `alloc`). File formats, the command line
//! and anything touching the OS live in the companion `schwarz-cli` crate.

#![no_std]

extern crate alloc;

pub mod bundles;
pub mod curve;
pub mod error;
pub mod linalg;
pub mod phase;
pub mod poly;
pub mod quaddom;
pub mod schwarz;
pub mod transforms;

pub use num_complex::Complex64 as C64;

pub use crate::curve::{AnalyticCurve, ConformalCurve, ContourGrid, Location, PolygonCurve};
pub use crate::error::{Error, Result};
pub use crate::poly::Polynomial;
