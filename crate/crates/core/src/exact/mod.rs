//! Exact arithmetic: rationals, Gaussian rationals and polynomials over them.

pub mod bivariate;
pub mod gaussian;
pub mod poly;
pub mod rational;
mod serde_impl;

pub use bivariate::{BivariatePoly, FloatBivariate};
pub use gaussian::GaussianRational;
pub use poly::{poly_definite_integral, DensityPoly};
pub use rational::{format_rational, parse_rational, rat, Rational};
pub use serde_impl::serialize_rational;
