//! Antenna density functions for near-field MIMO with movable antennas.
//!
//! A placement of `M` transmit antennas on a line is described by its
//! density `w(p)` over the normalized aperture `p ∈ [−1, 1]`, with
//! `∫w = M − 1`. The crate synthesizes near-field channels, evaluates
//! achievable rates for discrete placements and for densities, optimizes
//! densities by functional gradient ascent, provides the closed-form
//! edge-singular density family with its Beta-quantile discretization, and
//! evaluates Toeplitz determinant asymptotics for the associated Gram
//! surrogate.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod asymptotics;
pub mod baselines;
pub mod channel;
pub mod closedform;
pub mod error;
pub mod geometry;
pub mod harness;
pub mod io;
pub mod rate;
pub mod rng;
pub mod specfun;
pub mod variational;

mod quad;

pub use error::{Error, Result};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/densities.md")]
    mod densities {}
    #[doc = include_str!("../../../book/src/channels.md")]
    mod channels {}
    #[doc = include_str!("../../../book/src/optimizer.md")]
    mod optimizer {}
    #[doc = include_str!("../../../book/src/closed_form.md")]
    mod closed_form {}
    #[doc = include_str!("../../../book/src/asymptotics.md")]
    mod asymptotics {}
    #[doc = include_str!("../../../book/src/curves.md")]
    mod curves {}
    #[doc = include_str!("../../../book/src/baselines.md")]
    mod baselines {}
    #[doc = include_str!("../../../book/src/experiments.md")]
    mod experiments {}
}
