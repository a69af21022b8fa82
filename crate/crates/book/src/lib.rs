//! The guide in `book/` cannot run its snippets against this workspace on its
//! own, so each chapter is pulled in here and `cargo test` checks it as a
//! doc-test. One module per chapter keeps failures traceable.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}
#[doc = include_str!("../../../book/src/lattices.md")]
pub mod lattices {}
#[doc = include_str!("../../../book/src/bksf.md")]
pub mod bksf {}
#[doc = include_str!("../../../book/src/mlsc.md")]
pub mod mlsc_codes {}
#[doc = include_str!("../../../book/src/aux.md")]
pub mod aux {}
#[doc = include_str!("../../../book/src/analysis.md")]
pub mod analysis {}
#[doc = include_str!("../../../book/src/state_prep.md")]
pub mod state_prep {}
#[doc = include_str!("../../../book/src/lowering.md")]
pub mod lowering {}
#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
