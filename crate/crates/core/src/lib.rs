//! Time observables for free quantum evolution.
//!
//! A solution of a free Schrödinger (or positive-frequency Klein-Gordon)
//! equation is not normalizable as a function of space *and* time, but it
//! still assigns finite values to many operators on the enlarged space
//! `L²(ℝ_t × ℝ_x)`. This crate evaluates those values numerically:
//!
//! - [`weights`]: space/time weights `∫_I dt ∫_J dx |ψ|²`, dwell times and
//!   conditional probabilities `P(I|J)`;
//! - [`povm`]: the time-of-arrival measure at the origin, its finite-aperture
//!   regularization and the Aharonov-Bohm time operator (plus the
//!   relativistic analogue);
//! - [`cosmology`]: the minisuperspace Wheeler-DeWitt model with the scalar
//!   field as emergent time;
//! - [`oracle`]: brute-force grid references that share no code with the
//!   adaptive quadrature in [`numerics`].
//!
//! Conventions: `ħ = 1`, and wave functions are built from momentum
//! amplitudes as `ψ(t,x) = ∫dp e^{-iE(p)t + ipx} φ(p)` without a `2π`
//! prefactor, so `∫|ψ(t,x)|² dx = 2π ∫|φ(p)|² dp`.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]
// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;
#[cfg(test)]
extern crate std;

mod bilinear;
pub mod cosmology;
mod error;
pub mod numerics;
pub mod oracle;
pub mod povm;
pub mod validation;
pub mod wavepacket;
pub mod weights;

pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use numerics::{Interval, QuadResult, Quadrature};
pub use wavepacket::{Dispersion, MomentumProfile, Wavepacket};

/// Version string echoed into every result record.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
