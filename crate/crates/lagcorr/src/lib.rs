//! Lagrangian correspondences between powers of an elliptic curve, in exact arithmetic.
//!
//! The crate models abelian varieties E^m (E with or without complex
//! multiplication) through their lattices, and computes with Lagrangian
//! correspondences between the symplectic varieties X_A = A x A^.

pub mod arith;
pub mod cocycle;
pub mod correspondence;
pub mod error;
pub mod heisenberg;
pub mod isogeny;
pub mod linalg;
pub mod sample;

pub use error::{Error, ErrorClass, Result};
