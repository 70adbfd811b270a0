//! Seeded randomized property suites, runnable from the command line.
//!
//! Each suite counts passing and failing cases and keeps the first failure.
//! The tree-norm suites take the norm as a parameter so a deliberately broken
//! implementation can be fed through the harness.

use std::fmt;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::branch::{
    build_splitting_tree, complete_subtree_branches, extract_rosenthal, select_separated,
    separation_upper_bound,
};
use crate::espace::{check_blocks, enorm, enorm_oracle, extract_blocks, project, EVector};
use crate::norm::{eval_branch, norm, norm_oracle, BranchCombo, TreeVector};
use crate::tree::{build_strongly_incomparable, check_strongly_incomparable, Branch, Node};

pub type NormFn = fn(&TreeVector) -> f64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Suite {
    NormOracle,
    Prop21,
    Rosenthal,
    Separation,
    Espace,
    All,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::NormOracle => "norm-oracle",
            Suite::Prop21 => "prop21",
            Suite::Rosenthal => "rosenthal",
            Suite::Separation => "separation",
            Suite::Espace => "espace",
            Suite::All => "all",
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct CheckConfig {
    pub seed: u64,
    pub tol: f64,
    /// Random cases per suite.
    pub cases: usize,
}

impl Default for CheckConfig {
    fn default() -> Self {
        CheckConfig {
            seed: 0,
            tol: 1e-9,
            cases: 500,
        }
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub passed: usize,
    pub failed: usize,
    pub first_failure: Option<String>,
}

impl SuiteReport {
    fn new(suite: Suite) -> Self {
        SuiteReport {
            suite: suite.name().to_string(),
            ..Default::default()
        }
    }

    fn record(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        if ok {
            self.passed += 1;
        } else {
            self.failed += 1;
            if self.first_failure.is_none() {
                self.first_failure = Some(describe());
            }
        }
    }

    fn record_result(&mut self, r: std::result::Result<(), String>) {
        match r {
            Ok(()) => self.record(true, String::new),
            Err(e) => self.record(false, || e),
        }
    }

    pub fn ok(&self) -> bool {
        self.failed == 0
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.ok() { "PASS" } else { "FAIL" };
        write!(
            f,
            "{status} {}: {} passed, {} failed",
            self.suite, self.passed, self.failed
        )?;
        if let Some(msg) = &self.first_failure {
            write!(f, "; first failure: {msg}")?;
        }
        Ok(())
    }
}

pub fn run_suite(suite: Suite, cfg: &CheckConfig) -> Vec<SuiteReport> {
    run_suite_with(suite, cfg, |x| norm(x).value)
}

/// Runs `suite` (every suite for [`Suite::All`]) with `norm_fn` standing in
/// for the tree norm.
pub fn run_suite_with(suite: Suite, cfg: &CheckConfig, norm_fn: NormFn) -> Vec<SuiteReport> {
    let one = |s: Suite| match s {
        Suite::NormOracle => norm_oracle_suite(cfg, norm_fn),
        Suite::Prop21 => prop21_suite(cfg, norm_fn),
        Suite::Rosenthal => rosenthal_suite(cfg),
        Suite::Separation => separation_suite(cfg),
        Suite::Espace => espace_suite(cfg),
        Suite::All => unreachable!(),
    };
    match suite {
        Suite::All => [
            Suite::NormOracle,
            Suite::Prop21,
            Suite::Rosenthal,
            Suite::Separation,
            Suite::Espace,
        ]
        .into_iter()
        .map(one)
        .collect(),
        s => vec![one(s)],
    }
}

fn rng_for(cfg: &CheckConfig, suite: Suite) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(cfg.seed ^ (suite as u64 + 1).wrapping_mul(0xA24B_AED4_963E_E407))
}

/// A uniformly random node on a level below `depth`.
pub fn random_node<R: Rng>(rng: &mut R, depth: usize) -> Node {
    let level = rng.gen_range(0..depth);
    Node::from_bits((0..level).map(|_| rng.gen::<bool>())).expect("level below 64")
}

/// Up to `support` random nodes carrying integer values in `-range..=range`.
pub fn random_tree_vector<R: Rng>(
    rng: &mut R,
    depth: usize,
    support: usize,
    range: i32,
) -> TreeVector {
    let mut x = TreeVector::zero(depth).expect("valid depth");
    for _ in 0..support {
        let node = random_node(rng, depth);
        x.set(node, rng.gen_range(-range..=range) as f64)
            .expect("node fits");
    }
    x
}

/// A strictly ascending chain whose standard construction fits in `depth`.
pub fn random_chain<R: Rng>(rng: &mut R, depth: usize) -> Vec<Node> {
    let mut chain = Vec::new();
    let mut node = Node::root();
    loop {
        chain.push(node);
        let room = depth - 1 - node.level();
        if room <= 1 || rng.gen_bool(0.25) {
            break;
        }
        let step = rng.gen_range(1..room);
        for _ in 0..step {
            node = node.child(rng.gen::<bool>() as u8).expect("fits");
        }
    }
    chain
}

/// `count` distinct random branches of the given depth.
pub fn random_branches<R: Rng>(rng: &mut R, depth: usize, count: usize) -> Vec<Branch> {
    let count = count.min(1usize << depth.min(20));
    let mut seen = std::collections::BTreeSet::new();
    while seen.len() < count {
        seen.insert(Node::from_bits((0..depth).map(|_| rng.gen::<bool>())).expect("fits"));
    }
    let mut out: Vec<Branch> = seen.into_iter().map(Branch::new).collect();
    out.shuffle(rng);
    out
}

/// Integer-valued inputs whose supports grow with the index.
pub fn random_block_inputs<R: Rng>(rng: &mut R, count: usize) -> Vec<EVector> {
    (0..count)
        .map(|j| loop {
            let width = 2 * j + 2;
            let v = EVector::from_entries((0..width).filter_map(|i| {
                if rng.gen_bool(0.6) {
                    Some((i, rng.gen_range(-2i32..=2) as f64))
                } else {
                    None
                }
            }))
            .expect("finite");
            if !v.is_zero() {
                break v;
            }
        })
        .collect()
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * (1.0 + a.abs().max(b.abs()))
}

fn norm_oracle_suite(cfg: &CheckConfig, norm_fn: NormFn) -> SuiteReport {
    let mut rng = rng_for(cfg, Suite::NormOracle);
    let mut rep = SuiteReport::new(Suite::NormOracle);
    for _ in 0..cfg.cases {
        let depth = rng.gen_range(1..=5);
        let support = rng.gen_range(1..=6);
        let x = random_tree_vector(&mut rng, depth, support, 3);
        let got = norm_fn(&x);
        match norm_oracle(&x) {
            Ok(want) => rep.record(close(got, want, cfg.tol), || {
                format!(
                    "{}: norm {got} vs oracle {want}",
                    serde_json::to_string(&x).unwrap_or_default()
                )
            }),
            Err(e) => rep.record(false, || e.to_string()),
        }
    }
    rep
}

fn prop21_suite(cfg: &CheckConfig, norm_fn: NormFn) -> SuiteReport {
    let mut rng = rng_for(cfg, Suite::Prop21);
    let mut rep = SuiteReport::new(Suite::Prop21);
    for _ in 0..cfg.cases {
        let depth = rng.gen_range(2..=8);
        let chain = random_chain(&mut rng, depth);
        let ts = match build_strongly_incomparable(&chain, depth) {
            Ok(ts) => ts,
            Err(e) => {
                rep.record(false, || format!("construction failed: {e}"));
                continue;
            }
        };
        if !matches!(check_strongly_incomparable(&ts), Ok(true)) {
            rep.record(false, || format!("{ts:?} is not strongly incomparable"));
            continue;
        }
        let coeffs: Vec<f64> = ts.iter().map(|_| rng.gen_range(-5.0..5.0)).collect();
        let x = TreeVector::from_entries(depth, ts.iter().copied().zip(coeffs.iter().copied()))
            .expect("nodes fit");
        let max = coeffs.iter().fold(0.0f64, |m, a| m.max(a.abs()));
        let v = norm_fn(&x);
        let ok = v >= max - cfg.tol && v <= 2f64.sqrt() * max + cfg.tol;
        rep.record(ok, || {
            format!("chain {chain:?}: norm {v} outside [{max}, √2·{max}]")
        });
    }
    rep
}

fn rosenthal_suite(cfg: &CheckConfig) -> SuiteReport {
    let mut rng = rng_for(cfg, Suite::Rosenthal);
    let mut rep = SuiteReport::new(Suite::Rosenthal);
    for _ in 0..cfg.cases {
        let depth = rng.gen_range(2..=12);
        let count = rng.gen_range(2..=12);
        let branches = random_branches(&mut rng, depth, count);
        let ext = match extract_rosenthal(&branches) {
            Ok(e) => e,
            Err(e) => {
                rep.record(false, || e.to_string());
                continue;
            }
        };
        if let Err(e) = ext.check_invariants() {
            rep.record(false, || e);
            continue;
        }
        let coeffs: Vec<f64> = (0..ext.len()).map(|_| rng.gen_range(-3.0..3.0)).collect();
        let r = (|| -> crate::Result<std::result::Result<(), String>> {
            let ones = vec![1.0; ext.len()];
            let w = norm(&ext.witness(&ones)?).value;
            let expected = if ext.len() >= 2 { 2f64.sqrt() } else { 1.0 };
            if (w - expected).abs() > cfg.tol {
                return Ok(Err(format!("witness norm {w}, expected {expected}")));
            }
            let (lo, hi) = ext.l1_bounds(&coeffs)?;
            let l1: f64 = coeffs.iter().map(|a| a.abs()).sum();
            if lo < l1 / 2f64.sqrt() - cfg.tol || lo > hi + cfg.tol || (hi - l1).abs() > cfg.tol {
                return Ok(Err(format!("bounds ({lo}, {hi}) for Σ|a| = {l1}")));
            }
            Ok(Ok(()))
        })();
        match r {
            Ok(r) => rep.record_result(r),
            Err(e) => rep.record(false, || e.to_string()),
        }
    }
    rep
}

fn separation_suite(cfg: &CheckConfig) -> SuiteReport {
    let mut rng = rng_for(cfg, Suite::Separation);
    let mut rep = SuiteReport::new(Suite::Separation);
    let per_instance = 20;
    for case in 0..cfg.cases.div_ceil(per_instance).max(1) {
        let n = case % 6 + 1;
        let depth = n + rng.gen_range(0..=6);
        let r = (|| -> crate::Result<std::result::Result<(), String>> {
            let branches = complete_subtree_branches(n, depth, &mut rng)?;
            let sep = select_separated(&build_splitting_tree(&branches)?, n)?;
            if let Err(e) = sep.check_invariants() {
                return Ok(Err(e));
            }
            let coeffs: Vec<f64> = (0..2 * n).map(|_| rng.gen_range(-2.0..2.0)).collect();
            let bound = separation_upper_bound(&sep, &coeffs)?;
            let f = BranchCombo::new(
                depth,
                sep.branches.iter().copied().zip(coeffs.iter().copied()),
            )?;
            for _ in 0..per_instance {
                let x = random_tree_vector(&mut rng, depth + 1, 2 * depth + 2, 4);
                let nx = norm(&x).value;
                if nx == 0.0 {
                    continue;
                }
                let v = eval_branch(&f, &x)?.abs() / nx;
                if v > bound + cfg.tol {
                    return Ok(Err(format!(
                        "n={n}: |f(x)|/‖x‖ = {v} exceeds bound {bound}"
                    )));
                }
            }
            Ok(Ok(()))
        })();
        match r {
            Ok(r) => rep.record_result(r),
            Err(e) => rep.record(false, || e.to_string()),
        }
    }
    rep
}

fn espace_suite(cfg: &CheckConfig) -> SuiteReport {
    let mut rng = rng_for(cfg, Suite::Espace);
    let mut rep = SuiteReport::new(Suite::Espace);
    for _ in 0..cfg.cases {
        let len = rng.gen_range(1..=12);
        let v = EVector::from_entries((0..len).map(|i| (i, rng.gen_range(-3i32..=3) as f64)))
            .expect("finite");
        let (a, b) = (enorm(&v), enorm_oracle(&v));
        rep.record(close(a, b, cfg.tol), || {
            format!("{v:?}: norm {a} vs oracle {b}")
        });
        let eta = rng.gen_range(0..=len);
        let p = enorm(&project(&v, eta));
        rep.record(p <= a + cfg.tol, || {
            format!("‖P_{eta} x‖ = {p} > ‖x‖ = {a}")
        });
    }
    for _ in 0..cfg.cases.div_ceil(5) {
        let count = rng.gen_range(1..=8);
        let xs = random_block_inputs(&mut rng, count);
        match extract_blocks(&xs) {
            Ok(res) => rep.record_result(check_blocks(&xs, &res, cfg.tol)),
            Err(e) => rep.record(false, || e.to_string()),
        }
    }
    rep
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_suites_pass() {
        let cfg = CheckConfig {
            cases: 60,
            ..Default::default()
        };
        for rep in run_suite(Suite::All, &cfg) {
            assert!(rep.ok(), "{rep}");
            assert!(rep.passed > 0);
        }
    }

    #[test]
    fn broken_norm_is_caught() {
        fn sup_norm(x: &TreeVector) -> f64 {
            x.max_abs()
        }
        let cfg = CheckConfig {
            cases: 100,
            ..Default::default()
        };
        let reps = run_suite_with(Suite::All, &cfg, sup_norm);
        assert!(reps.iter().any(|r| !r.ok()));
        assert!(reps[0].first_failure.is_some());
    }
}
