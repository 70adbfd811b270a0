//! The interval-norm space on an ordinal line, at finite scale.

mod blocks;
mod vector;

pub use blocks::{
    check_blocks, extract_blocks, extract_blocks_with, span_residual, Block, BlockExtraction,
    KernelMethod, SINGULAR_THRESHOLD,
};
pub use vector::{enorm, enorm_oracle, project, EVector};
