use thiserror::Error;

use crate::tree::{Branch, Node};

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("node on level {level} does not fit a tree of depth {depth}")]
    DepthExceeded { level: usize, depth: usize },
    #[error("segment top {top} is not an ancestor of bottom {bottom}")]
    NotASegment { top: Node, bottom: Node },
    #[error("segments do not share a common level span")]
    MixedSpan,
    #[error("segments starting at {0} and {1} overlap")]
    Overlap(Node, Node),
    #[error("single-node segments are not admissible in strict mode")]
    DegenerateSpan,
    #[error("an admissible family needs at least one segment")]
    EmptyFamily,
    #[error("nodes do not form a strictly ascending chain at position {0}")]
    NotAChain(usize),
    #[error("duplicate node {0}")]
    DuplicateNodes(Node),
    #[error("ancestor closure has {nodes} nodes, oracle cap is {cap}")]
    TooLarge { nodes: usize, cap: usize },
    #[error("vector depth {vector} is incompatible with branch depth {functional}")]
    DepthMismatch { vector: usize, functional: usize },
    #[error("the functional is zero")]
    ZeroFunctional,
    #[error("at least two branches are required")]
    NeedTwoBranches,
    #[error("duplicate branch {0}")]
    DuplicateBranches(Branch),
    #[error("input is empty")]
    EmptyInput,
    #[error("splitting trie is not complete at level {0}")]
    TrieIncomplete(usize),
    #[error("expected {expected} values, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("input vector {0} is zero")]
    ZeroVector(usize),
    #[error("infeasible request: {0}")]
    Infeasible(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
