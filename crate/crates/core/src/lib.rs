//! Finite causal sets sprinkled into exactly solvable Lorentzian slabs.
//!
//! * [`spacetime`]: unit-volume cylinder, lightcone-square and needle models.
//! * [`order`]: finite partial orders, canonical classes and automorphisms.
//! * [`sprinkling`]: volume-uniform sampling, class distributions, uniformity
//!   and volume-law checks, covering sequences.
//! * [`distances`]: correspondence distortion, the cone metrics `D_r` and
//!   their three-component comparison.

pub mod distances;
pub mod error;
pub mod order;
pub mod parallel;
pub mod rng;
pub mod spacetime;
pub mod sprinkling;
pub mod stats;

pub use error::{Error, Result};
