//! Block sequences with disjoint, increasing supports.
//!
//! Given `y_0 … y_m` with largest support index `A`, the next block is a
//! nonzero `y` in the span of the next few unused inputs with `P_{A+1} y = 0`:
//! a kernel vector of the map (coefficients) → (coordinates below `A+1`)
//! that is not killed by the full map. Kernel vectors exist as soon as the
//! block holds more vectors than there are coordinates below `A+1`.

use std::collections::{BTreeMap, BTreeSet};

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use super::{enorm, EVector};
use crate::error::{Error, Result};
use crate::norm::to_rational;

/// Singular values below this count as zero in the floating-point kernel.
pub const SINGULAR_THRESHOLD: f64 = 1e-10;

/// Largest denominator (in bits) for which inputs are treated as exact.
const EXACT_DENOMINATOR_BITS: u64 = 20;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum KernelMethod {
    /// Exact when every entry is a short binary fraction, else numeric.
    #[default]
    Auto,
    Exact,
    Numeric,
}

#[derive(Clone, Debug, Serialize)]
pub struct Block {
    /// Unit-norm block vector.
    pub vector: EVector,
    /// Inputs `start..end` span the block.
    pub start: usize,
    pub end: usize,
    /// `vector = Σ coeffs[j] · xs[start + j]`.
    pub coeffs: Vec<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct BlockExtraction {
    pub blocks: Vec<Block>,
    /// Set when the inputs ran out before `max_blocks` was reached.
    pub exhausted: bool,
}

pub fn extract_blocks(xs: &[EVector]) -> Result<BlockExtraction> {
    extract_blocks_with(xs, KernelMethod::Auto, None)
}

pub fn extract_blocks_with(
    xs: &[EVector],
    method: KernelMethod,
    max_blocks: Option<usize>,
) -> Result<BlockExtraction> {
    if xs.is_empty() {
        return Err(Error::EmptyInput);
    }
    if let Some(i) = xs.iter().position(|x| x.is_zero()) {
        return Err(Error::ZeroVector(i));
    }
    let exact = match method {
        KernelMethod::Exact => true,
        KernelMethod::Numeric => false,
        KernelMethod::Auto => xs
            .iter()
            .all(|x| x.iter().all(|(_, v)| is_short_fraction(*v))),
    };

    let first = &xs[0];
    let n0 = enorm(first);
    let mut blocks = vec![Block {
        vector: first.scaled(1.0 / n0),
        start: 0,
        end: 1,
        coeffs: vec![1.0 / n0],
    }];
    let mut next = 1;
    loop {
        if max_blocks.is_some_and(|m| blocks.len() >= m) {
            return Ok(BlockExtraction {
                blocks,
                exhausted: false,
            });
        }
        let xi = blocks
            .last()
            .unwrap()
            .vector
            .max_index()
            .expect("nonzero block")
            + 1;
        let mut found = None;
        for k in 1..=(xs.len() - next) {
            let window = &xs[next..next + k];
            let hit = if exact {
                exact_kernel(window, xi)
            } else {
                numeric_kernel(window, xi)
            };
            if let Some((y, c)) = hit {
                found = Some((y, c, k));
                break;
            }
        }
        let Some((y, c, k)) = found else {
            return Ok(BlockExtraction {
                blocks,
                exhausted: true,
            });
        };
        let ny = enorm(&y);
        blocks.push(Block {
            vector: y.scaled(1.0 / ny),
            start: next,
            end: next + k,
            coeffs: c.iter().map(|v| v / ny).collect(),
        });
        next += k;
    }
}

fn is_short_fraction(v: f64) -> bool {
    let r = to_rational(v);
    r.denom().bits() <= EXACT_DENOMINATOR_BITS
}

fn combine(window: &[EVector], coeffs: &[f64]) -> EVector {
    window
        .iter()
        .zip(coeffs)
        .fold(EVector::zero(), |acc, (x, c)| acc.add_scaled(x, *c))
}

/// Kernel search by rational elimination. Returns `y = Σ c_j x_j` with
/// `P_xi y = 0`, `y ≠ 0`.
fn exact_kernel(window: &[EVector], xi: usize) -> Option<(EVector, Vec<f64>)> {
    let k = window.len();
    let rows: BTreeSet<usize> = window
        .iter()
        .flat_map(|x| x.iter().map(|(i, _)| *i).filter(|i| *i < xi))
        .collect();
    let mut m: Vec<Vec<BigRational>> = rows
        .iter()
        .map(|&r| window.iter().map(|x| to_rational(x.get(r))).collect())
        .collect();

    // reduced row echelon form
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..k {
        let Some(p) = (row..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(row, p);
        let inv = BigRational::one() / m[row][col].clone();
        for v in &mut m[row][col..] {
            *v = v.clone() * inv.clone();
        }
        let pivot_row = m[row].clone();
        for (r, other) in m.iter_mut().enumerate() {
            if r != row && !other[col].is_zero() {
                let factor = other[col].clone();
                for (v, p) in other[col..].iter_mut().zip(&pivot_row[col..]) {
                    *v = v.clone() - factor.clone() * p.clone();
                }
            }
        }
        pivots.push(col);
        row += 1;
        if row == m.len() {
            break;
        }
    }

    let free: Vec<usize> = (0..k).filter(|c| !pivots.contains(c)).collect();
    for f in free {
        let mut c = vec![BigRational::zero(); k];
        c[f] = BigRational::one();
        for (r, &p) in pivots.iter().enumerate() {
            c[p] = -m[r][f].clone();
        }
        let mut y: BTreeMap<usize, BigRational> = BTreeMap::new();
        for (x, cj) in window.iter().zip(&c) {
            if cj.is_zero() {
                continue;
            }
            for (i, v) in x.iter() {
                let e = y.entry(*i).or_insert_with(BigRational::zero);
                *e = e.clone() + cj.clone() * to_rational(*v);
            }
        }
        y.retain(|_, v| !v.is_zero());
        if y.is_empty() {
            continue;
        }
        debug_assert!(y.keys().all(|i| *i >= xi));
        // scale to keep the float conversion well-conditioned
        let scale = y
            .values()
            .map(|v| v.abs())
            .max()
            .unwrap_or_else(|| BigRational::from_integer(BigInt::one()));
        let to_f = |v: &BigRational| (v.clone() / scale.clone()).to_f64().unwrap_or(0.0);
        let yv = EVector::from_map(y.iter().map(|(i, v)| (*i, to_f(v))).collect());
        let cv = c.iter().map(to_f).collect();
        return Some((yv, cv));
    }
    None
}

/// Kernel search through a singular value decomposition of the restricted
/// map, padded to a square matrix so every null direction appears in `Vᵀ`.
fn numeric_kernel(window: &[EVector], xi: usize) -> Option<(EVector, Vec<f64>)> {
    let k = window.len();
    let rows: Vec<usize> = window
        .iter()
        .flat_map(|x| x.iter().map(|(i, _)| *i).filter(|i| *i < xi))
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let dim = rows.len().max(k);
    let mut a = DMatrix::<f64>::zeros(dim, k);
    for (r, &idx) in rows.iter().enumerate() {
        for (c, x) in window.iter().enumerate() {
            a[(r, c)] = x.get(idx);
        }
    }
    let svd = a.svd(false, true);
    let v_t = svd.v_t.expect("requested Vᵀ");
    let mut best: Option<(f64, EVector, Vec<f64>)> = None;
    for (i, sigma) in svd.singular_values.iter().enumerate() {
        if *sigma >= SINGULAR_THRESHOLD {
            continue;
        }
        let c: Vec<f64> = v_t.row(i).iter().copied().collect();
        let raw = combine(window, &c);
        let tail = EVector::from_map(
            raw.iter()
                .filter(|(i, _)| **i >= xi)
                .map(|(i, v)| (*i, *v))
                .collect(),
        );
        let cutoff = tail.max_abs() * 1e-12;
        let tail = EVector::from_map(
            tail.iter()
                .filter(|(_, v)| v.abs() > cutoff)
                .map(|(i, v)| (*i, *v))
                .collect(),
        );
        let size = enorm(&tail);
        if size > 1e-8 && best.as_ref().is_none_or(|(s, _, _)| size > *s) {
            best = Some((size, tail, c));
        }
    }
    best.map(|(_, y, c)| (y, c))
}

/// `enorm(block.vector − Σ coeffs · inputs)`.
pub fn span_residual(xs: &[EVector], block: &Block) -> f64 {
    let combo = combine(&xs[block.start..block.end], &block.coeffs);
    enorm(&block.vector.add_scaled(&combo, -1.0))
}

/// Checks unit norm, disjoint increasing supports, contiguity of the input
/// ranges and span membership up to `tol`.
pub fn check_blocks(
    xs: &[EVector],
    result: &BlockExtraction,
    tol: f64,
) -> std::result::Result<(), String> {
    let mut prev_end = 0;
    let mut prev_max: Option<usize> = None;
    for (m, b) in result.blocks.iter().enumerate() {
        let nrm = enorm(&b.vector);
        if (nrm - 1.0).abs() > tol {
            return Err(format!("block {m} has norm {nrm}"));
        }
        if b.start != prev_end || b.end <= b.start || b.end > xs.len() {
            return Err(format!("block {m} spans inputs {}..{}", b.start, b.end));
        }
        let lo = b.vector.min_index().ok_or(format!("block {m} is zero"))?;
        if prev_max.is_some_and(|p| p >= lo) {
            return Err(format!(
                "block {m} starts at {lo}, overlapping the previous block"
            ));
        }
        let r = span_residual(xs, b);
        if r > tol {
            return Err(format!("block {m} span residual {r}"));
        }
        prev_end = b.end;
        prev_max = b.vector.max_index();
    }
    Ok(())
}
