//! Doc-test shim for the guide in `book/`.
//!
//! mdBook cannot compile its code listings against this workspace, so each
//! chapter is included here as module documentation and `cargo test --doc`
//! runs every Rust snippet. A chapter that drifts from the library breaks
//! the build.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/functions.md")]
pub mod functions {}

#[doc = include_str!("../../../book/src/quadrature.md")]
pub mod quadrature {}

#[doc = include_str!("../../../book/src/hardy-constant.md")]
pub mod hardy_constant {}

#[doc = include_str!("../../../book/src/half-interval.md")]
pub mod half_interval {}

#[doc = include_str!("../../../book/src/cylinders.md")]
pub mod cylinders {}

#[doc = include_str!("../../../book/src/surfaces.md")]
pub mod surfaces {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
