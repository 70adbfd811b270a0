//! The dyadic tree truncated to finite depth.

mod incomparable;
mod node;
mod segment;

pub use incomparable::{
    build_strongly_incomparable, check_strongly_incomparable, max_family_coverage, triple_coverable,
};
pub use node::{is_ancestor, meet, Branch, Node, MAX_LEVEL};
pub use segment::{check_admissible, AdmissibleFamily, Mode, Segment};
