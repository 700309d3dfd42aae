//! Diversity-multiplexing (manifold extraction) analysis for multicarrier
//! continuous-variable QKD.
//!
//! The pipeline runs from phase-space sampling and the subcarrier transform
//! ([`phase_space`]), through Gaussian sub-channels with Rayleigh fading
//! ([`channel`]) and their SVD eigenchannels ([`singular_layer`]), to rate
//! formulas ([`rates`]), closed-form error probabilities and tradeoff curves
//! ([`manifold`]), constellations ([`constellation`]) and Monte Carlo outage
//! estimates ([`montecarlo`]). [`cli`] wires it all to CSV output.
//!
//! Complex variances are `E|z|^2`; each quadrature carries half of it.

// `!(x > 0.0)` style guards are used on purpose: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod channel;
pub mod cli;
pub mod constellation;
pub mod error;
mod fmt;
pub mod manifold;
pub mod montecarlo;
pub mod phase_space;
pub mod rates;
pub mod rng;
pub mod singular_layer;

#[cfg(test)]
#[path = "../tests/common/oracle.rs"]
pub(crate) mod test_oracle;

pub use error::{Error, Result};
pub use num_complex::Complex64;
