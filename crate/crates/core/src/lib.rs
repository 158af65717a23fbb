//! Supersolvable toric arrangements in complex tori.
//!
//! The crate models an arrangement by integer characters with root-of-unity
//! labels, decides whether it admits a chain of (T)M-ideals, and computes the
//! invariants that such a chain determines: root maps, braid monodromy,
//! presentations, LCS Lie algebra relations, the degree-two cohomology ideal,
//! Betti numbers and topological complexity.

pub mod arrangement;
pub mod error;
pub mod fixtures;
pub mod invariants;
pub mod linalg;
pub mod roots;
pub mod tracer;
pub mod words;

pub use error::{Error, Result};
