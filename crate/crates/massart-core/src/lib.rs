//! Learning homogeneous halfspaces on the uniform unit ball under bounded
//! (Massart) label noise.
//!
//! The crate provides three groups of functionality:
//!
//! * **Learners** ([`learn`]): a margin-based active learner that localizes
//!   to a shrinking band around its current guess and minimizes a normalized
//!   hinge loss inside a shrinking hypothesis ball each round, plus the two
//!   classic baselines it is measured against (the averaging learner and
//!   one-shot hinge minimization over the unit ball).
//! * **Adversarial constructions** ([`noise`], [`bounds`]): label oracles
//!   realizing bounded noise, including the quadrant construction that defeats
//!   averaging and the two-dimensional wedge distribution on which one-shot
//!   hinge minimization is inconsistent, together with the closed-form
//!   analytics (drift angles, per-region hinge integrals, noise thresholds)
//!   for both negative results.
//! * **Numerical verification** ([`verify`]): every quantitative bound used
//!   by the analysis — band mass brackets, disagreement tails, the in-band
//!   hinge and error bounds, generalization gaps, and the closed-form
//!   contraction inequality — as an executable, seeded check that reports its
//!   numeric margin.
//!
//! All sampling goes through caller-supplied RNG streams; the crate is
//! `no_std` (with `alloc`) and keeps IO, configuration, and file formats in
//! the companion CLI crate.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod bounds;
pub mod error;
pub mod geometry;
pub mod learn;
pub mod loss;
pub mod noise;
pub mod quad;
pub mod seeds;
pub mod solver;
pub mod verify;

pub use error::{Error, Result};
pub use geometry::{angle, BallPoint, Band, UnitVector};
pub use noise::{Label, LabeledExample, MassartInstance};
