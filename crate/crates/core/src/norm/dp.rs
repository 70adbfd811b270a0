//! Exact evaluation of the tree norm by dynamic programming.
//!
//! Segments of an admissible family share their top level and are disjoint
//! exactly when their tops differ. Each segment is a downward path from its
//! top, and in extended mode its bottom is free, so the supremum decouples:
//! every top node contributes the largest absolute sum of a downward path
//! starting at it, independently of the others. For a fixed top level the
//! best family therefore has squared value `Σ_{lev(s)=ℓ} M(s)²`, where
//!
//! ```text
//! P⁺(s) = x(s) + max(0, P⁺(s0), P⁺(s1))
//! P⁻(s) = x(s) + min(0, P⁻(s0), P⁻(s1))
//! M(s)  = max(P⁺(s), −P⁻(s))
//! ```
//!
//! Nodes outside the ancestor closure of the support have `M = 0`.

use std::collections::HashMap;

use serde::Serialize;

use super::TreeVector;
use crate::tree::{check_admissible, AdmissibleFamily, Mode, Node, Segment};

/// The norm of a vector with a family attaining it.
#[derive(Clone, Debug, Serialize)]
pub struct NormBreakdown {
    pub value: f64,
    /// `value²` as accumulated by the level sums.
    pub squared: f64,
    /// Top level η₁ of the attaining family.
    pub witness_level: usize,
    /// `None` for the zero vector.
    pub witness_family: Option<AdmissibleFamily>,
    /// Segment sums of the witness family, in family order.
    pub witness_sums: Vec<f64>,
}

#[derive(Clone, Copy, Debug, Default)]
struct PathSums {
    plus: f64,
    minus: f64,
}

impl PathSums {
    fn best(&self) -> f64 {
        self.plus.max(-self.minus)
    }
}

fn path_table(x: &TreeVector) -> HashMap<Node, PathSums> {
    let mut closure: Vec<Node> = x.ancestor_closure().into_iter().collect();
    closure.sort_by_key(|n| std::cmp::Reverse(n.level()));
    let mut table: HashMap<Node, PathSums> = HashMap::with_capacity(closure.len());
    for s in closure {
        let mut up = 0.0f64;
        let mut down = 0.0f64;
        if s.level() + 1 < x.depth() {
            for c in s.children().expect("level below depth") {
                if let Some(p) = table.get(&c) {
                    up = up.max(p.plus);
                    down = down.min(p.minus);
                }
            }
        }
        let v = x.get(&s);
        table.insert(
            s,
            PathSums {
                plus: v + up,
                minus: v + down,
            },
        );
    }
    table
}

/// Follows the optimal downward path from `start`. Ties prefer stopping,
/// then the `0` child.
fn trace(start: Node, positive: bool, table: &HashMap<Node, PathSums>, depth: usize) -> Node {
    let mut cur = start;
    loop {
        if cur.level() + 1 >= depth {
            return cur;
        }
        let mut next: Option<(Node, f64)> = None;
        for c in cur.children().expect("level below depth") {
            if let Some(p) = table.get(&c) {
                let gain = if positive { p.plus } else { -p.minus };
                if gain > 0.0 && next.is_none_or(|(_, g)| gain > g) {
                    next = Some((c, gain));
                }
            }
        }
        match next {
            Some((c, _)) => cur = c,
            None => return cur,
        }
    }
}

/// The extended-mode norm `sup (Σ_j |I_j*(x)|²)^{1/2}` with an attaining family.
///
/// Among levels attaining the maximum the lowest wins; within a level the
/// family lists its segments in lexicographic order of their tops.
pub fn norm(x: &TreeVector) -> NormBreakdown {
    let table = path_table(x);
    let mut level_sums = vec![0.0f64; x.depth()];
    for (s, p) in &table {
        let m = p.best();
        level_sums[s.level()] += m * m;
    }
    let mut best_level = 0;
    let mut best = 0.0f64;
    for (l, v) in level_sums.iter().enumerate() {
        if *v > best {
            best = *v;
            best_level = l;
        }
    }
    if best == 0.0 {
        return NormBreakdown {
            value: 0.0,
            squared: 0.0,
            witness_level: 0,
            witness_family: None,
            witness_sums: Vec::new(),
        };
    }

    let mut tops: Vec<(&Node, &PathSums)> = table
        .iter()
        .filter(|(s, p)| s.level() == best_level && p.best() > 0.0)
        .collect();
    tops.sort_by_key(|(s, _)| **s);
    let mut segments = Vec::with_capacity(tops.len());
    let mut sums = Vec::with_capacity(tops.len());
    for (s, p) in tops {
        let positive = p.plus >= -p.minus;
        let bottom = trace(*s, positive, &table, x.depth());
        let seg = Segment::new(*s, bottom).expect("traced downward");
        sums.push(seg.nodes().map(|n| x.get(&n)).sum());
        segments.push(seg);
    }
    let family = check_admissible(&segments, Mode::Extended).expect("distinct tops on one level");
    NormBreakdown {
        value: best.sqrt(),
        squared: best,
        witness_level: best_level,
        witness_family: Some(family),
        witness_sums: sums,
    }
}

/// Shorthand for `norm(x).value`.
pub fn norm_value(x: &TreeVector) -> f64 {
    let table = path_table(x);
    let mut level_sums = vec![0.0f64; x.depth()];
    for (s, p) in &table {
        let m = p.best();
        level_sums[s.level()] += m * m;
    }
    level_sums.into_iter().fold(0.0, f64::max).sqrt()
}
