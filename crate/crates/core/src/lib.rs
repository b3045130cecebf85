//! Entangled coherent states: generation by cavity QED and beam splitters,
//! concurrence and negativity, photon-loss decoherence and monogamy.
//!
//! States are finite superpositions of products of coherent states and every
//! overlap is evaluated in closed form. The [`fock`] module recomputes the
//! same quantities in a truncated number basis as an independent check.

pub mod coherent;
pub mod error;
pub mod figures;
pub mod fock;
pub mod linalg;
pub mod measures;
pub mod optics;
pub mod protocol;

pub use error::{Error, Result};
