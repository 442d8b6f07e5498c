//! Numerical core for studying the link between continuous maximal
//! regularity and analytic semigroup generation on finite-dimensional
//! operators.
//!
//! The crate is `no_std` (it needs `alloc`). Everything here is a pure
//! function of immutable data, so values can be shared freely across
//! threads by callers that have them.
//!
//! Layout:
//! - [`linop`]: the operator pair `(E0, E1)`, resolvents, spectra, and the
//!   two semigroup evaluators ([`expm`] oracle and [`contour`] quadrature).
//! - [`grid`], [`forcing`], [`cauchy`]: time grids, sampled functions, the
//!   solution operator and the maximal-regularity constant estimator.
//! - [`theorem`]: the resolvent construction from a black-box solver.
//! - [`weighted`]: time-weighted norms, trace norms and interpolation scales.
#![no_std]
// `!(x > 0.0)` is used on purpose so that NaN is rejected
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod cauchy;
pub mod contour;
mod error;
pub mod expm;
pub mod forcing;
pub mod grid;
pub mod linop;
pub mod quadrature;
pub mod scalar;
pub mod theorem;
pub mod weighted;

pub use cauchy::{CauchySolver, MatrixSolver, MaxRegEstimate};
pub use contour::{Contour, ContourKind};
pub use error::{Error, Result};
pub use forcing::Forcing;
pub use grid::{GridFunction, TimeGrid};
pub use linop::{E0Norm, OperatorPair, SpectralReport, Structure};
pub use scalar::C64;
