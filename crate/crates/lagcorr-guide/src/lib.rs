//! The book's chapters, compiled so that `cargo test` runs every listing.
//!
//! mdbook cannot resolve crate dependencies when it tests snippets, so each
//! chapter is included here as the doc comment of an empty module instead.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}
#[doc = include_str!("../../../book/src/base_rings.md")]
pub mod base_rings {}
#[doc = include_str!("../../../book/src/isogenies.md")]
pub mod isogenies {}
#[doc = include_str!("../../../book/src/correspondences.md")]
pub mod correspondences {}
#[doc = include_str!("../../../book/src/cocycles.md")]
pub mod cocycles {}
#[doc = include_str!("../../../book/src/heisenberg.md")]
pub mod heisenberg {}
#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
#[doc = include_str!("../../../book/src/verification.md")]
pub mod verification {}
