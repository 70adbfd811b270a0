//! Finite-depth models of a tree-indexed Banach space and of its
//! interval-norm companion on an ordinal line.
//!
//! * [`tree`]: nodes, segments, admissible families, strongly incomparable sets.
//! * [`norm`]: vectors, the tree norm (dynamic program and brute-force
//!   oracle), branch functionals and their dual-norm bounds.
//! * [`branch`]: ℓ₁ subsequence extraction, splitting tries, separated
//!   selections and the distortion experiment.
//! * [`espace`]: the interval norm, level projections and block extraction.
//! * [`checks`]: randomized property suites shared by the CLI and tests.

pub mod branch;
pub mod checks;
pub mod cli;
pub mod error;
pub mod espace;
pub mod norm;
pub mod tree;

pub use error::{Error, Result};
