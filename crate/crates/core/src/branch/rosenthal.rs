//! Greedy extraction of an ℓ₁-equivalent subsequence of branch functionals.
//!
//! At every step the active branches share a longest common prefix `s`.
//! The successor of `s` carrying the strict majority of active branches
//! (ties go to the `0` child) continues; the first-listed branch through the
//! other successor `t` is picked, and only branches through the continuing
//! side that come after the pick remain active. The exit nodes `t` form a
//! strongly incomparable set and `B_{l_j}*(e_{t_i}) = δ_ij`, so the witness
//! `Σ sgn(a_i) e_{t_i}` of norm √2 certifies
//! `‖Σ a_i B_{l_i}*‖ ≥ Σ|a_i| / √2`.

use std::collections::HashSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::norm::{eval_branch, norm, BranchCombo, TreeVector};
use crate::tree::{check_strongly_incomparable, Branch, Node};

#[derive(Clone, Debug, Serialize)]
pub struct ExtractionResult {
    /// Depth of the input branches.
    pub depth: usize,
    /// Zero-based positions in the input list, strictly increasing.
    pub picked_indices: Vec<usize>,
    pub picked_branches: Vec<Branch>,
    pub split_nodes: Vec<Node>,
    pub continue_children: Vec<Node>,
    pub exit_children: Vec<Node>,
}

fn sgn(v: f64) -> f64 {
    if v > 0.0 {
        1.0
    } else if v < 0.0 {
        -1.0
    } else {
        0.0
    }
}

pub(crate) fn validate_branches(branches: &[Branch]) -> Result<usize> {
    let depth = branches.first().ok_or(Error::EmptyInput)?.depth();
    let mut seen = HashSet::with_capacity(branches.len());
    for b in branches {
        if b.depth() != depth {
            return Err(Error::DepthMismatch {
                vector: b.depth(),
                functional: depth,
            });
        }
        if !seen.insert(*b) {
            return Err(Error::DuplicateBranches(*b));
        }
    }
    Ok(depth)
}

pub fn extract_rosenthal(branches: &[Branch]) -> Result<ExtractionResult> {
    if branches.len() < 2 {
        return Err(Error::NeedTwoBranches);
    }
    let depth = validate_branches(branches)?;
    let mut out = ExtractionResult {
        depth,
        picked_indices: Vec::new(),
        picked_branches: Vec::new(),
        split_nodes: Vec::new(),
        continue_children: Vec::new(),
        exit_children: Vec::new(),
    };
    let mut active: Vec<usize> = (0..branches.len()).collect();
    while active.len() >= 2 {
        let split = active
            .iter()
            .map(|&i| branches[i].end())
            .reduce(|a, b| a.meet(&b))
            .expect("nonempty");
        if split.level() >= depth {
            break;
        }
        let level = split.level();
        let (zero_side, one_side): (Vec<usize>, Vec<usize>) = active
            .iter()
            .partition(|&&i| branches[i].end().bit(level) == 0);
        let (cont_bit, cont_side, exit_side) = if one_side.len() > zero_side.len() {
            (1u8, one_side, zero_side)
        } else {
            (0u8, zero_side, one_side)
        };
        let pick = *exit_side.iter().min().expect("split has both sides");
        out.picked_indices.push(pick);
        out.picked_branches.push(branches[pick]);
        out.split_nodes.push(split);
        out.continue_children.push(split.child(cont_bit)?);
        out.exit_children.push(split.child(1 - cont_bit)?);
        active = cont_side.into_iter().filter(|&i| i > pick).collect();
    }
    Ok(out)
}

impl ExtractionResult {
    pub fn len(&self) -> usize {
        self.picked_indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.picked_indices.is_empty()
    }

    /// Depth of the tree holding the exit nodes.
    pub fn vector_depth(&self) -> usize {
        self.depth + 1
    }

    /// `Σ a_i B_{l_i}*`.
    pub fn combo(&self, coeffs: &[f64]) -> Result<BranchCombo> {
        self.check_len(coeffs)?;
        BranchCombo::new(
            self.depth,
            self.picked_branches
                .iter()
                .copied()
                .zip(coeffs.iter().copied()),
        )
    }

    /// `Σ sgn(a_i) e_{t_i}`.
    pub fn witness(&self, coeffs: &[f64]) -> Result<TreeVector> {
        self.check_len(coeffs)?;
        TreeVector::from_entries(
            self.vector_depth(),
            self.exit_children
                .iter()
                .copied()
                .zip(coeffs.iter().map(|a| sgn(*a))),
        )
    }

    /// Certified lower bound `|f(x)| / ‖x‖` from the sign witness, with the
    /// trivial upper bound `Σ|a_i|`.
    pub fn l1_bounds(&self, coeffs: &[f64]) -> Result<(f64, f64)> {
        let f = self.combo(coeffs)?;
        let x = self.witness(coeffs)?;
        let upper = f.l1_norm();
        if x.is_zero() {
            return Ok((0.0, upper));
        }
        let lower = eval_branch(&f, &x)?.abs() / norm(&x).value;
        Ok((lower, upper))
    }

    fn check_len(&self, coeffs: &[f64]) -> Result<()> {
        if coeffs.len() != self.len() {
            return Err(Error::LengthMismatch {
                expected: self.len(),
                got: coeffs.len(),
            });
        }
        Ok(())
    }

    /// Verifies the structural guarantees of the extraction.
    pub fn check_invariants(&self) -> std::result::Result<(), String> {
        let m = self.len();
        for w in self.picked_indices.windows(2) {
            if w[0] >= w[1] {
                return Err(format!("picks not increasing: {w:?}"));
            }
        }
        for i in 0..m {
            let (s, phi, t) = (
                self.split_nodes[i],
                self.continue_children[i],
                self.exit_children[i],
            );
            if phi.parent() != Some(s) || t.parent() != Some(s) || phi == t {
                return Err(format!("{phi} and {t} are not the successors of {s}"));
            }
            if i + 1 < m && !phi.is_ancestor_of(&self.split_nodes[i + 1]) {
                return Err(format!("chain broken: {phi} ≰ {}", self.split_nodes[i + 1]));
            }
        }
        match check_strongly_incomparable(&self.exit_children) {
            Ok(true) => {}
            Ok(false) => return Err("exit nodes are not strongly incomparable".into()),
            Err(e) => return Err(e.to_string()),
        }
        for (j, b) in self.picked_branches.iter().enumerate() {
            let f = BranchCombo::single(*b);
            for (i, t) in self.exit_children.iter().enumerate() {
                let e = TreeVector::unit(self.vector_depth(), *t).map_err(|e| e.to_string())?;
                let v = eval_branch(&f, &e).map_err(|e| e.to_string())?;
                let expected = if i == j { 1.0 } else { 0.0 };
                if v != expected {
                    return Err(format!("B_{j}*(e_t{i}) = {v}, expected {expected}"));
                }
            }
        }
        Ok(())
    }
}
