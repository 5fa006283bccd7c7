//! Operator Bezoutiant for pairs of entire functions
//! `F(z) = ∫₀ᵃ e^{izt}·conj(Ψ(t)) dt` with polynomial densities `Ψ`.
//!
//! The exact layers ([`exact`], [`transform`], [`bezoutiant`], [`symbol`])
//! never touch floating point. The numerical layers ([`zeros`], [`oplab`])
//! verify every symbolic claim independently, and [`pipeline`] ties both
//! together for the command-line front end.

pub mod bezoutiant;
pub mod error;
pub mod exact;
pub mod oplab;
pub mod pipeline;
pub mod quadrature;
pub mod symbol;
pub mod transform;
pub mod zeros;

pub use error::{BezoutError, ParseError, ZeroError};
