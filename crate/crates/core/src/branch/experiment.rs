use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::separation::{alternating_coeffs, select_separated, separation_upper_bound};
use super::splitting::build_splitting_tree;
use crate::error::{Error, Result};
use crate::norm::{dual_norm_bounds_with, BranchCombo};
use crate::tree::{Branch, Node, MAX_LEVEL};

/// Coordinate-ascent budget used by the distortion sweep.
pub const DEFAULT_EFFORT: usize = 2000;

/// Per-row seed, so rows do not depend on evaluation order.
pub fn row_seed(seed: u64, n: usize) -> u64 {
    seed ^ (n as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

/// The `2^n` branches of a randomly spread complete subtree of height `n`.
///
/// Each split node sits a random number of levels below its trie parent's
/// successor; the remaining levels are padded with random bits.
pub fn complete_subtree_branches<R: Rng>(
    n: usize,
    depth: usize,
    rng: &mut R,
) -> Result<Vec<Branch>> {
    if depth < n {
        return Err(Error::Infeasible(format!(
            "depth {depth} cannot host a complete trie of height {n}"
        )));
    }
    if depth >= MAX_LEVEL {
        return Err(Error::InvalidArgument(format!(
            "depth must be below {MAX_LEVEL}"
        )));
    }
    let mut out = Vec::with_capacity(1usize << n);
    let mut stack = vec![(Node::root(), n)];
    while let Some((prefix, remaining)) = stack.pop() {
        let slack = depth - prefix.level() - remaining;
        let gap = if remaining == 0 {
            slack
        } else {
            rng.gen_range(0..=slack)
        };
        let mut node = prefix;
        for _ in 0..gap {
            node = node.child(rng.gen::<bool>() as u8)?;
        }
        if remaining == 0 {
            out.push(Branch::new(node));
        } else {
            stack.push((node.child(1)?, remaining - 1));
            stack.push((node.child(0)?, remaining - 1));
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DistortionRow {
    pub n: usize,
    pub num_branches: usize,
    pub eta1: usize,
    pub eta2: usize,
    pub upper_bound: f64,
    pub lower_estimate: f64,
    pub delta_bound: f64,
}

/// Builds separated branches at trie level `n` and bounds
/// `‖Σ_{i≤n} B_i* − Σ_{i≤n} B_{n+i}*‖` from both sides.
///
/// `delta_bound` is the upper bound divided by `Σ|a_i| = 2n`.
pub fn distortion_experiment(
    n: usize,
    depth: usize,
    seed: u64,
    effort: usize,
) -> Result<DistortionRow> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(row_seed(seed, n));
    let branches = complete_subtree_branches(n, depth, &mut rng)?;
    let tree = build_splitting_tree(&branches)?;
    let sep = select_separated(&tree, n)?;
    let coeffs = alternating_coeffs(n);
    let upper = separation_upper_bound(&sep, &coeffs)?;
    let f = BranchCombo::new(
        depth,
        sep.branches.iter().copied().zip(coeffs.iter().copied()),
    )?;
    let bounds = dual_norm_bounds_with(&f, effort, Some(&sep))?;
    Ok(DistortionRow {
        n,
        num_branches: branches.len(),
        eta1: sep.eta1,
        eta2: sep.eta2,
        upper_bound: upper,
        lower_estimate: bounds.lower,
        delta_bound: upper / f.l1_norm(),
    })
}

/// Rows for `n = 1..=n_max`, ordered by `n`.
pub fn distortion_sweep(
    n_max: usize,
    depth: usize,
    seed: u64,
    effort: usize,
) -> Result<Vec<DistortionRow>> {
    (1..=n_max)
        .into_par_iter()
        .map(|n| distortion_experiment(n, depth, seed, effort))
        .collect()
}

/// `(√2 + 1) / √(2n)`.
pub fn delta_formula(n: usize) -> f64 {
    (2f64.sqrt() + 1.0) / ((2 * n) as f64).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generator_is_complete() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in 1..=5 {
            let bs = complete_subtree_branches(n, 9, &mut rng).unwrap();
            assert_eq!(bs.len(), 1 << n);
            let t = build_splitting_tree(&bs).unwrap();
            assert!(t.level_complete(n));
            assert_eq!(t.height(), n);
        }
        let bs = complete_subtree_branches(3, 3, &mut rng).unwrap();
        assert_eq!(bs.len(), 8);
        assert!(complete_subtree_branches(4, 3, &mut rng).is_err());
    }

    #[test]
    fn formula_values() {
        assert!((delta_formula(2) - 1.2071067811865475).abs() < 1e-15);
        assert!((delta_formula(8) - 0.6035533905932737).abs() < 1e-15);
        for n in 1..20 {
            assert!(delta_formula(n + 1) < delta_formula(n));
        }
    }

    #[test]
    fn small_rows() {
        for n in 1..=3 {
            let row = distortion_experiment(n, 8, 1, 200).unwrap();
            assert!((row.delta_bound - delta_formula(n)).abs() < 1e-12);
            assert!(row.lower_estimate <= row.upper_bound + 1e-9);
            assert!(row.lower_estimate >= ((2 * n) as f64).sqrt() - 1e-9);
            assert!(row.eta1 <= row.eta2);
        }
        assert!(matches!(
            distortion_experiment(5, 4, 1, 10),
            Err(Error::Infeasible(_))
        ));
    }
}
