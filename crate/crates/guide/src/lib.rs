//! Doctest carrier for the mdbook guide in `book/`.
//!
//! mdbook cannot run code blocks against workspace dependencies, so each
//! chapter is included here as module documentation and `cargo test --doc`
//! executes every snippet. One module per chapter keeps test failures
//! attributable to their source file.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/model-algebra.md")]
pub mod model_algebra {}

#[doc = include_str!("../../../book/src/scalar-solver.md")]
pub mod scalar_solver {}

#[doc = include_str!("../../../book/src/shooting.md")]
pub mod shooting {}

#[doc = include_str!("../../../book/src/bubbles.md")]
pub mod bubbles {}

#[doc = include_str!("../../../book/src/ledger.md")]
pub mod ledger {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
