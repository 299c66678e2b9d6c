//! The guide in `book/` as doc-tests: each chapter is attached to a module
//! so `cargo test` compiles and runs its snippets against the library.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}
#[doc = include_str!("../../../book/src/series.md")]
pub mod series {}
#[doc = include_str!("../../../book/src/fock.md")]
pub mod fock {}
#[doc = include_str!("../../../book/src/tau.md")]
pub mod tau {}
#[doc = include_str!("../../../book/src/frobenius.md")]
pub mod frobenius {}
#[doc = include_str!("../../../book/src/loop-group.md")]
pub mod loop_group {}
#[doc = include_str!("../../../book/src/stabilization.md")]
pub mod stabilization {}
#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
