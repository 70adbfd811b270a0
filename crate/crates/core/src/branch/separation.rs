//! Tournament selection of `2n` branches with controlled separation levels,
//! and the resulting upper bound on `‖Σ a_i B_i*‖`.

use std::collections::HashSet;

use serde::Serialize;

use super::splitting::{trie_level, SplittingTree};
use crate::error::{Error, Result};
use crate::tree::{Branch, Node};

/// `2n` branches where `B_i` and `B_{n+i}` separate right below `ψ_i`.
///
/// With `η₁ = lev(ψ_n)` and `η₂ = lev(ψ_1)`:
/// 1. the tails on levels `≥ η₂ + 1` are pairwise disjoint;
/// 2. the middles on levels `η₁+1 ..= η₂` are pairwise disjoint within each
///    half;
/// 3. `B_i` and `B_{n+i}` agree on levels `≤ η₁`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SeparationData {
    pub branches: Vec<Branch>,
    pub psi: Vec<Node>,
    pub eta1: usize,
    pub eta2: usize,
}

/// Runs the tournament on trie level `n`.
///
/// Each round takes the sibling pair sitting deepest in the tree (ties to
/// the smaller trie index) among the pairs still in play, records its split
/// node, and then drops the half of the current subtree that contained it.
pub fn select_separated(tree: &SplittingTree, n: usize) -> Result<SeparationData> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    if !tree.level_complete(n) {
        return Err(Error::TrieIncomplete(n));
    }
    let mut branches_lo = Vec::with_capacity(n);
    let mut branches_hi = Vec::with_capacity(n);
    let mut psi = Vec::with_capacity(n);
    let mut current = 1u64;
    for round in 1..=n {
        let shift = (n - 1) - trie_level(current);
        let first_parent = current << shift;
        let last_parent = first_parent + (1u64 << shift);
        let mut best: Option<(u64, Node)> = None;
        for p in first_parent..last_parent {
            let s = tree
                .entry(p)
                .and_then(|e| e.split_node)
                .ok_or(Error::TrieIncomplete(n))?;
            if best.is_none_or(|(_, b)| s.level() > b.level()) {
                best = Some((p, s));
            }
        }
        let (parent, split) = best.expect("at least one pair");
        psi.push(split);
        let left = tree.entry(2 * parent).ok_or(Error::TrieIncomplete(n))?;
        let right = tree.entry(2 * parent + 1).ok_or(Error::TrieIncomplete(n))?;
        branches_lo.push(left.first_branch);
        branches_hi.push(right.first_branch);
        if round < n {
            let half = parent >> ((n - 1) - round);
            current = half ^ 1;
        }
    }
    let eta1 = psi[n - 1].level();
    let eta2 = psi[0].level();
    branches_lo.extend(branches_hi);
    Ok(SeparationData {
        branches: branches_lo,
        psi,
        eta1,
        eta2,
    })
}

fn band(b: &Branch, lo: usize, hi: usize) -> HashSet<Node> {
    (lo..=hi.min(b.depth())).map(|l| b.node_at(l)).collect()
}

fn pairwise_disjoint(sets: &[HashSet<Node>]) -> bool {
    for i in 0..sets.len() {
        for j in i + 1..sets.len() {
            if !sets[i].is_disjoint(&sets[j]) {
                return false;
            }
        }
    }
    true
}

impl SeparationData {
    pub fn n(&self) -> usize {
        self.psi.len()
    }

    /// Checks the level ordering of the `ψ_i` and properties (1)–(3) by
    /// explicit node-set computations.
    pub fn check_invariants(&self) -> std::result::Result<(), String> {
        let n = self.n();
        if self.branches.len() != 2 * n || n == 0 {
            return Err(format!(
                "expected {} branches, got {}",
                2 * n,
                self.branches.len()
            ));
        }
        if self.psi.windows(2).any(|w| w[0].level() < w[1].level()) {
            return Err("ψ levels are not non-increasing".into());
        }
        if self.eta1 != self.psi[n - 1].level() || self.eta2 != self.psi[0].level() {
            return Err("η₁/η₂ disagree with ψ".into());
        }
        let depth = self.branches[0].depth();
        let tails: Vec<_> = self
            .branches
            .iter()
            .map(|b| band(b, self.eta2 + 1, depth))
            .collect();
        if !pairwise_disjoint(&tails) {
            return Err("property (1): tails intersect".into());
        }
        let middles: Vec<_> = self
            .branches
            .iter()
            .map(|b| band(b, self.eta1 + 1, self.eta2))
            .collect();
        if !pairwise_disjoint(&middles[..n]) || !pairwise_disjoint(&middles[n..]) {
            return Err("property (2): middles intersect within a half".into());
        }
        for i in 0..n {
            let a = band(&self.branches[i], 0, self.eta1);
            let b = band(&self.branches[n + i], 0, self.eta1);
            if a != b {
                return Err(format!(
                    "property (3): B_{} and B_{} differ below η₁",
                    i + 1,
                    n + i + 1
                ));
            }
            if !self.branches[i].passes_through(&self.psi[i])
                || !self.branches[n + i].passes_through(&self.psi[i])
            {
                return Err(format!("pair {} does not pass through ψ", i + 1));
            }
        }
        Ok(())
    }
}

/// `(√2 + 1)·‖a‖₂ + Σ_{i≤n} |a_i + a_{n+i}|`, an upper bound for
/// `‖Σ a_i B_i*‖` obtained by splitting a vector into the level bands
/// `≤ η₁`, `η₁+1 ..= η₂` and `≥ η₂+1`.
pub fn separation_upper_bound(sep: &SeparationData, coeffs: &[f64]) -> Result<f64> {
    let n = sep.n();
    if coeffs.len() != 2 * n {
        return Err(Error::LengthMismatch {
            expected: 2 * n,
            got: coeffs.len(),
        });
    }
    let l2 = coeffs.iter().map(|a| a * a).sum::<f64>().sqrt();
    let paired: f64 = (0..n).map(|i| (coeffs[i] + coeffs[n + i]).abs()).sum();
    Ok((2f64.sqrt() + 1.0) * l2 + paired)
}

/// Coefficients `(1, …, 1, −1, …, −1)` cancelling every paired term.
pub fn alternating_coeffs(n: usize) -> Vec<f64> {
    let mut a = vec![1.0; n];
    a.extend(std::iter::repeat_n(-1.0, n));
    a
}
