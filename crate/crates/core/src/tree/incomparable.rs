//! Strongly incomparable node sets.
//!
//! A set is strongly incomparable when its nodes are pairwise incomparable
//! and no admissible family covers three of them. Covering three nodes
//! `a, b, c` needs a top level `ℓ ≤ min lev` on which their ancestors are
//! pairwise distinct, i.e. every pairwise meet sits strictly above `ℓ`.

use std::collections::HashSet;

use super::{Node, Segment};
use crate::error::{Error, Result};

/// Picks, for each node of an ascending chain, the successor that leaves the
/// chain. The last node has no follower and gets its `0` child.
///
/// `depth` bounds the output: every returned node has level `< depth`.
pub fn build_strongly_incomparable(chain: &[Node], depth: usize) -> Result<Vec<Node>> {
    for (i, w) in chain.windows(2).enumerate() {
        if !(w[0].is_ancestor_of(&w[1]) && w[0].level() < w[1].level()) {
            return Err(Error::NotAChain(i + 1));
        }
    }
    let mut out = Vec::with_capacity(chain.len());
    for (i, s) in chain.iter().enumerate() {
        let bit = match chain.get(i + 1) {
            Some(next) => 1 - next.bit(s.level()),
            None => 0,
        };
        let t = s.child(bit)?;
        if t.level() >= depth {
            return Err(Error::DepthExceeded {
                level: t.level(),
                depth,
            });
        }
        out.push(t);
    }
    Ok(out)
}

/// Whether some admissible family covers all three nodes.
pub fn triple_coverable(a: &Node, b: &Node, c: &Node) -> bool {
    let need = [a.meet(b), a.meet(c), b.meet(c)]
        .iter()
        .map(|m| m.level() + 1)
        .max()
        .unwrap();
    let have = a.level().min(b.level()).min(c.level());
    need <= have
}

/// Closed-form test for strong incomparability.
pub fn check_strongly_incomparable(nodes: &[Node]) -> Result<bool> {
    let mut seen = HashSet::with_capacity(nodes.len());
    for n in nodes {
        if !seen.insert(*n) {
            return Err(Error::DuplicateNodes(*n));
        }
    }
    for i in 0..nodes.len() {
        for j in i + 1..nodes.len() {
            if !nodes[i].is_incomparable(&nodes[j]) {
                return Ok(false);
            }
        }
    }
    for i in 0..nodes.len() {
        for j in i + 1..nodes.len() {
            for k in j + 1..nodes.len() {
                if triple_coverable(&nodes[i], &nodes[j], &nodes[k]) {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// Exhaustive oracle: the largest number of `targets` covered by a single
/// extended-mode admissible family of the depth-`depth` tree.
///
/// Enumerates every segment with top level `η₁` (any bottom), then every
/// subset of pairwise node-disjoint segments. Exponential; meant for
/// depth ≤ 4.
pub fn max_family_coverage(targets: &[Node], depth: usize) -> usize {
    let targets: HashSet<Node> = targets.iter().copied().collect();
    let mut best = 0;
    for eta1 in 0..depth {
        let segments = segments_from_level(eta1, depth);
        let mut chosen: Vec<&Segment> = Vec::new();
        best = best.max(cover_search(&segments, 0, &mut chosen, &targets));
    }
    best
}

fn segments_from_level(eta1: usize, depth: usize) -> Vec<Segment> {
    let mut out = Vec::new();
    for code in 0u64..(1u64 << eta1) {
        let top = Node::from_bits((0..eta1).map(|i| (code >> i) & 1 == 1)).unwrap();
        let mut frontier = vec![top];
        while let Some(bottom) = frontier.pop() {
            out.push(Segment::new(top, bottom).unwrap());
            if bottom.level() + 1 < depth {
                frontier.extend(bottom.children().unwrap());
            }
        }
    }
    out
}

fn cover_search<'a>(
    segments: &'a [Segment],
    start: usize,
    chosen: &mut Vec<&'a Segment>,
    targets: &HashSet<Node>,
) -> usize {
    let covered = targets
        .iter()
        .filter(|t| chosen.iter().any(|s| s.contains(t)))
        .count();
    let mut best = covered;
    for i in start..segments.len() {
        let s = &segments[i];
        if chosen.iter().any(|c| c.intersects(s)) {
            continue;
        }
        chosen.push(s);
        best = best.max(cover_search(segments, i + 1, chosen, targets));
        chosen.pop();
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    fn nodes(v: &[&str]) -> Vec<Node> {
        v.iter().map(|s| s.parse().unwrap()).collect()
    }

    fn strs(v: &[Node]) -> Vec<String> {
        v.iter().map(|n| n.to_bit_string()).collect()
    }

    #[test]
    fn standard_construction() {
        let out = build_strongly_incomparable(&nodes(&["", "0", "00"]), 4).unwrap();
        assert_eq!(strs(&out), ["1", "01", "000"]);
        let out = build_strongly_incomparable(&nodes(&[""]), 2).unwrap();
        assert_eq!(strs(&out), ["0"]);
        let out = build_strongly_incomparable(&nodes(&["", "1"]), 3).unwrap();
        assert_eq!(strs(&out), ["0", "10"]);
        assert!(build_strongly_incomparable(&[], 1).unwrap().is_empty());
    }

    #[test]
    fn construction_errors() {
        let err = build_strongly_incomparable(&nodes(&["", "1", "0"]), 5);
        assert!(matches!(err, Err(Error::NotAChain(2))));
        let err = build_strongly_incomparable(&nodes(&["0", "0"]), 5);
        assert!(matches!(err, Err(Error::NotAChain(1))));
        let err = build_strongly_incomparable(&nodes(&["", "0", "00"]), 3);
        assert!(matches!(
            err,
            Err(Error::DepthExceeded { level: 3, depth: 3 })
        ));
    }

    #[test]
    fn closed_form_examples() {
        assert!(check_strongly_incomparable(&nodes(&["1", "01", "001"])).unwrap());
        assert!(!check_strongly_incomparable(&nodes(&["00", "01", "10"])).unwrap());
        assert!(check_strongly_incomparable(&nodes(&["0", "1"])).unwrap());
        assert!(check_strongly_incomparable(&nodes(&["0"])).unwrap());
        assert!(!check_strongly_incomparable(&nodes(&["0", "01"])).unwrap());
        assert!(matches!(
            check_strongly_incomparable(&nodes(&["0", "0"])),
            Err(Error::DuplicateNodes(_))
        ));
    }

    #[test]
    fn oracle_examples() {
        assert_eq!(max_family_coverage(&nodes(&["1", "01", "001"]), 4), 2);
        assert_eq!(max_family_coverage(&nodes(&["00", "01", "10"]), 4), 3);
        assert_eq!(max_family_coverage(&nodes(&["0", "1"]), 3), 2);
    }
}
