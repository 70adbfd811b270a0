//! Vectors on the tree, the tree norm, and branch functionals.

mod dp;
mod dual;
mod oracle;
mod vector;

pub use dp::{norm, norm_value, NormBreakdown};
pub use dual::{dual_norm_bounds, dual_norm_bounds_with, DualBounds};
pub use oracle::{
    norm_oracle, norm_oracle_exact, norm_oracle_squared, norm_oracle_strict,
    norm_oracle_strict_squared, norm_oracle_with_cap, rational_from_int, to_rational, OracleScalar,
    DEFAULT_ORACLE_CAP, STRICT_ORACLE_MAX_DEPTH,
};
pub use vector::{eval_branch, segment_sum, BranchCombo, TreeVector};
