//! Finite-stage workbench for permutation-representation actions of groups on
//! the universal UHF algebra.
//!
//! The crate builds embeddings of residually finite groups into products of
//! cyclic and symmetric groups, realises the resulting actions on finite
//! tensor stages `M_{n_1} ⊗ ... ⊗ M_{n_L}` with exact rational arithmetic,
//! synthesises and verifies Rokhlin towers and outerness witnesses, and
//! computes Bratteli diagrams and K-theoretic invariants of the crossed
//! products.

pub mod arith;
pub mod cli;
pub mod error;
pub mod groups;
pub mod gset;
pub mod ktheory;
pub mod perm;
pub mod rokhlin;
pub mod uhf;

pub use error::{Error, Result};
pub use perm::Permutation;
