//! One-sided bounds on the norm of a branch functional combination.
//!
//! The lower bound is always a ratio `|f(x)| / ‖x‖` for an explicit witness
//! `x`; the upper bound is `Σ|a_B|`, sharpened by the level-band estimate
//! when separation data for the branches is available.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use super::{eval_branch, norm, norm_value, BranchCombo, TreeVector};
use crate::branch::{extract_rosenthal, separation_upper_bound, SeparationData};
use crate::error::{Error, Result};
use crate::tree::{Branch, Node};

#[derive(Clone, Debug, Serialize)]
pub struct DualBounds {
    pub lower: f64,
    pub upper: f64,
    pub witness: TreeVector,
    /// Norm evaluations spent in coordinate ascent.
    pub evaluations: usize,
}

pub fn dual_norm_bounds(f: &BranchCombo, effort: usize) -> Result<DualBounds> {
    dual_norm_bounds_with(f, effort, None)
}

fn sign(v: f64) -> f64 {
    if v > 0.0 {
        1.0
    } else if v < 0.0 {
        -1.0
    } else {
        0.0
    }
}

struct Search {
    weights: BTreeMap<Node, f64>,
    best: Option<(f64, TreeVector, f64)>,
}

impl Search {
    fn ratio(&self, x: &TreeVector) -> Option<(f64, f64)> {
        let nrm = norm_value(x);
        if nrm == 0.0 {
            return None;
        }
        let val: f64 = x
            .iter()
            .map(|(n, v)| v * self.weights.get(n).copied().unwrap_or(0.0))
            .sum();
        Some((val.abs() / nrm, val))
    }

    fn offer(&mut self, x: TreeVector) {
        if let Some((r, val)) = self.ratio(&x) {
            if self.best.as_ref().is_none_or(|(b, _, _)| r > *b) {
                self.best = Some((r, x, val));
            }
        }
    }
}

/// Lower and upper bounds on `‖f‖` over the unit ball of the tree norm.
///
/// Candidate witnesses: `e_root`, per-level sign indicators of the node
/// weights `f(e_s)`, the sign witness of the greedy ℓ₁ extraction, then
/// coordinate ascent on the prefixes of `f`'s branches for at most `effort`
/// norm evaluations.
pub fn dual_norm_bounds_with(
    f: &BranchCombo,
    effort: usize,
    separation: Option<&SeparationData>,
) -> Result<DualBounds> {
    if f.is_empty() {
        return Err(Error::ZeroFunctional);
    }
    let depth = f.vector_depth();
    let mut weights: BTreeMap<Node, f64> = BTreeMap::new();
    for (b, a) in f.terms() {
        for n in b.nodes() {
            *weights.entry(n).or_insert(0.0) += a;
        }
    }
    let mut search = Search {
        weights,
        best: None,
    };

    search.offer(TreeVector::unit(depth, Node::root())?);
    for level in 0..depth {
        let x = TreeVector::from_entries(
            depth,
            search
                .weights
                .iter()
                .filter(|(n, _)| n.level() == level)
                .map(|(n, w)| (*n, sign(*w))),
        )?;
        search.offer(x);
    }
    if f.len() >= 2 {
        let mut ordered: Vec<(Branch, f64)> = f.terms().map(|(b, a)| (*b, *a)).collect();
        ordered.sort_by(|x, y| y.1.abs().total_cmp(&x.1.abs()));
        let branches: Vec<Branch> = ordered.iter().map(|(b, _)| *b).collect();
        let ext = extract_rosenthal(&branches)?;
        let coeffs: Vec<f64> = ext.picked_indices.iter().map(|&i| ordered[i].1).collect();
        search.offer(ext.witness(&coeffs)?);
    }

    let (mut best_ratio, mut x, mut fx) = search.best.clone().expect("e_root is never zero");
    let nodes: BTreeSet<Node> = search.weights.keys().copied().collect();
    let mut step = 0.5 * x.max_abs();
    let mut evaluations = 0;
    'ascent: while evaluations < effort && step > 1e-4 {
        let mut improved = false;
        for n in &nodes {
            let w = search.weights[n];
            for dir in [1.0, -1.0] {
                if evaluations >= effort {
                    break 'ascent;
                }
                let mut y = x.clone();
                y.add_to(*n, dir * step)?;
                evaluations += 1;
                let nrm = norm_value(&y);
                if nrm == 0.0 {
                    continue;
                }
                let fy = fx + dir * step * w;
                let r = fy.abs() / nrm;
                if r > best_ratio * (1.0 + 1e-12) {
                    best_ratio = r;
                    x = y;
                    fx = fy;
                    improved = true;
                }
            }
        }
        if !improved {
            step *= 0.5;
        }
    }

    let lower = eval_branch(f, &x)?.abs() / norm(&x).value;
    let mut upper = f.l1_norm();
    if let Some(sep) = separation {
        upper = upper.min(separated_upper(f, sep)?);
    }
    Ok(DualBounds {
        lower,
        upper,
        witness: x,
        evaluations,
    })
}

/// Level-band bound on the separated part plus `Σ|a|` for the rest.
fn separated_upper(f: &BranchCombo, sep: &SeparationData) -> Result<f64> {
    if let Some(b) = sep.branches.first() {
        if b.depth() != f.depth() {
            return Err(Error::DepthMismatch {
                vector: b.depth(),
                functional: f.depth(),
            });
        }
    }
    let coeffs: Vec<f64> = sep.branches.iter().map(|b| f.coeff(b)).collect();
    let covered: BTreeSet<&Branch> = sep.branches.iter().collect();
    let rest: f64 = f
        .terms()
        .filter(|(b, _)| !covered.contains(b))
        .map(|(_, a)| a.abs())
        .sum();
    Ok(separation_upper_bound(sep, &coeffs)? + rest)
}
