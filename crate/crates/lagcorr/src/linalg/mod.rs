//! Exact linear algebra over O and K.

pub mod matrix;
pub mod snf;

pub use matrix::Mat;
pub use snf::{cokernel_torsion_order, kernel_lattice, saturate, smith_normal_form, SnfResult};
