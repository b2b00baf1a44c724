//! Exact continued fractions over the completion of the Puiseux field
//! `E<<t^{-1}>>`, and the Berkovich half-plane model on which `SL_2` of the
//! Puiseux polynomial ring acts.
//!
//! The crate is `no_std` and needs only `alloc`. Conventions: `nu(t) = -1`,
//! `deg = -nu`, `nu(0) = +inf`, `deg(0) = -inf`.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod berkovich;
pub mod cf;
pub mod error;
pub mod exponent;
pub mod field;
pub mod poly;
pub mod rational;
pub mod series;
pub mod typeiv;
mod terms;

pub use error::{Error, Result};
pub use exponent::{q, Degree, Exponent, Valuation};
pub use field::{Field, Fp, Rational};
pub use poly::PuiseuxPoly;
pub use rational::{reduce_fraction, RationalPuiseux};
pub use series::{sqrt_stream, SeriesStream, TermSource, TruncatedSeries};
pub use terms::Term;
