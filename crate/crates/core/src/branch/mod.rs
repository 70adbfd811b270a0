//! Branch functionals: subsequence extraction, splitting tries, separated
//! selections and the distortion experiment.

mod experiment;
mod rosenthal;
mod separation;
mod splitting;

pub use experiment::{
    complete_subtree_branches, delta_formula, distortion_experiment, distortion_sweep, row_seed,
    DistortionRow, DEFAULT_EFFORT,
};
pub use rosenthal::{extract_rosenthal, ExtractionResult};
pub use separation::{
    alternating_coeffs, select_separated, separation_upper_bound, SeparationData,
};
pub use splitting::{
    build_splitting_tree, build_splitting_tree_with, trie_level, SplitOptions, SplittingTree,
    TrieEntry,
};
