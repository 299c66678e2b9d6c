//! Exact multi-component KP tau functions, their genus-zero Frobenius
//! potentials, and the twisted loop group action on both sides.

pub mod cutoffs;
pub mod error;
pub mod fock;
pub mod frobenius;
pub mod givental;
pub mod kptau;
pub mod ring;
pub mod sample;
pub mod stabilize;

pub use cutoffs::Cutoffs;
pub use error::{Error, Result};
