//! Brute-force evaluation of the tree norm.
//!
//! Shares nothing with the dynamic program beyond the vector type: every
//! family of pairwise node-disjoint downward paths with a common top level
//! is enumerated explicitly and its squared value accumulated.

use std::ops::{Add, Mul, Neg};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::TreeVector;
use crate::error::{Error, Result};
use crate::tree::Node;

/// Default bound on the ancestor closure the oracle accepts.
pub const DEFAULT_ORACLE_CAP: usize = 40;

/// Largest tree the strict oracle enumerates in full.
pub const STRICT_ORACLE_MAX_DEPTH: usize = 5;

/// Arithmetic the oracle can run in.
pub trait OracleScalar:
    Clone + PartialOrd + Zero + Add<Output = Self> + Mul<Output = Self> + Neg<Output = Self>
{
    fn from_f64(v: f64) -> Self;
}

impl OracleScalar for f64 {
    fn from_f64(v: f64) -> Self {
        v
    }
}

impl OracleScalar for BigRational {
    fn from_f64(v: f64) -> Self {
        <BigRational as num_traits::FromPrimitive>::from_f64(v).expect("finite entries")
    }
}

struct Path<S> {
    mask: u64,
    sum: S,
}

fn sq<S: OracleScalar>(v: &S) -> S {
    v.clone() * v.clone()
}

fn best_subfamily<S: OracleScalar>(paths: &[Path<S>], start: usize, used: u64, acc: S) -> S {
    let mut best = acc.clone();
    for (i, p) in paths.iter().enumerate().skip(start) {
        if p.mask & used != 0 {
            continue;
        }
        let v = best_subfamily(paths, i + 1, used | p.mask, acc.clone() + sq(&p.sum));
        if v > best {
            best = v;
        }
    }
    best
}

/// Squared extended-mode norm by exhaustive enumeration, in arithmetic `S`.
///
/// Paths are enumerated inside the ancestor closure of the support; leaving
/// the closure only adds zero entries.
pub fn norm_oracle_squared<S: OracleScalar>(x: &TreeVector, cap: usize) -> Result<S> {
    let closure: Vec<Node> = x.ancestor_closure().into_iter().collect();
    let cap = cap.min(64);
    if closure.len() > cap {
        return Err(Error::TooLarge {
            nodes: closure.len(),
            cap,
        });
    }
    let index = |n: &Node| closure.binary_search(n).ok();
    let mut best = S::zero();
    let max_level = closure.iter().map(|n| n.level()).max().unwrap_or(0);
    for eta1 in 0..=max_level {
        let mut paths: Vec<Path<S>> = Vec::new();
        for top in closure.iter().filter(|n| n.level() == eta1) {
            // depth-first over downward paths that stay in the closure
            let mut stack = vec![(*top, 1u64 << index(top).unwrap(), S::from_f64(x.get(top)))];
            while let Some((end, mask, sum)) = stack.pop() {
                if end.level() + 1 < x.depth() {
                    for c in end.children()? {
                        if let Some(i) = index(&c) {
                            stack.push((
                                c,
                                mask | (1u64 << i),
                                sum.clone() + S::from_f64(x.get(&c)),
                            ));
                        }
                    }
                }
                paths.push(Path { mask, sum });
            }
        }
        let v = best_subfamily(&paths, 0, 0, S::zero());
        if v > best {
            best = v;
        }
    }
    Ok(best)
}

/// Extended-mode norm by exhaustive enumeration in floating point.
pub fn norm_oracle(x: &TreeVector) -> Result<f64> {
    norm_oracle_with_cap(x, DEFAULT_ORACLE_CAP)
}

pub fn norm_oracle_with_cap(x: &TreeVector, cap: usize) -> Result<f64> {
    Ok(norm_oracle_squared::<f64>(x, cap)?.sqrt())
}

/// Squared extended-mode norm in exact rational arithmetic.
pub fn norm_oracle_exact(x: &TreeVector) -> Result<BigRational> {
    norm_oracle_squared::<BigRational>(x, DEFAULT_ORACLE_CAP)
}

fn full_index(n: &Node) -> u32 {
    // injective for levels < 6: (1 << level) | bits < 64
    let bits = n
        .bits()
        .enumerate()
        .fold(0u32, |a, (i, b)| a | ((b as u32) << i));
    (1u32 << n.level()) | bits
}

/// Squared norm under the literal admissibility rule: common top level η₁,
/// common bottom level η₂ with η₁ < η₂ ≤ depth − 1, every path confined to
/// the truncated tree.
pub fn norm_oracle_strict_squared<S: OracleScalar>(x: &TreeVector) -> Result<S> {
    if x.depth() > STRICT_ORACLE_MAX_DEPTH {
        return Err(Error::TooLarge {
            nodes: (1usize << x.depth()) - 1,
            cap: (1usize << STRICT_ORACLE_MAX_DEPTH) - 1,
        });
    }
    let mut best = S::zero();
    for eta1 in 0..x.depth() {
        for eta2 in eta1 + 1..x.depth() {
            let mut paths: Vec<Path<S>> = Vec::new();
            for code in 0u64..(1u64 << eta1) {
                let top = Node::from_bits((0..eta1).map(|i| (code >> i) & 1 == 1))?;
                for tail in 0u64..(1u64 << (eta2 - eta1)) {
                    let mut node = top;
                    let mut mask = 1u64 << full_index(&node);
                    let mut sum = S::from_f64(x.get(&node));
                    for i in 0..(eta2 - eta1) {
                        node = node.child(((tail >> i) & 1) as u8)?;
                        mask |= 1u64 << full_index(&node);
                        sum = sum + S::from_f64(x.get(&node));
                    }
                    paths.push(Path { mask, sum });
                }
            }
            let v = best_subfamily(&paths, 0, 0, S::zero());
            if v > best {
                best = v;
            }
        }
    }
    Ok(best)
}

pub fn norm_oracle_strict(x: &TreeVector) -> Result<f64> {
    Ok(norm_oracle_strict_squared::<f64>(x)?.sqrt())
}

/// Exact rational form of a finite float.
pub fn to_rational(v: f64) -> BigRational {
    <BigRational as OracleScalar>::from_f64(v)
}

pub fn rational_from_int(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}
