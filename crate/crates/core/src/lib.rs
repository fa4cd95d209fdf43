//! Exact and numerical tools for Hecke pairs, their operator models, and
//! the modular group acting on the upper half-plane.

pub mod coset;
pub mod error;
pub mod exact;
pub mod finite;
pub mod hyperbolic;
pub mod par;
pub mod qexp;
pub mod radial;
pub mod rep;
pub mod suite;

pub use error::{HeckeError, Result};
