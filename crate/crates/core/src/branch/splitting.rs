//! Condensation trie of a finite branch set.
//!
//! Entry `m` stands for a tree node `t_m` together with the node `s_m ≥ t_m`
//! where the branches through `t_m` split. Its children `2m` and `2m + 1`
//! stand for the two successors of `s_m`.

use std::collections::BTreeMap;

use serde::Serialize;

use super::rosenthal::validate_branches;
use crate::error::{Error, Result};
use crate::tree::{Branch, Node};

/// Knobs for the splitting rule.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SplitOptions {
    /// A node splits only when both successors carry at least this many
    /// branches. Below it the lighter side is dropped and the walk follows
    /// the heavy side.
    pub min_count: usize,
    /// Split nodes must lie strictly above this level.
    pub level_cap: Option<usize>,
}

impl Default for SplitOptions {
    fn default() -> Self {
        SplitOptions {
            min_count: 1,
            level_cap: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TrieEntry {
    /// Heap index: the root is 1, the children of `m` are `2m` and `2m + 1`.
    pub index: u64,
    pub t_node: Node,
    /// `None` on leaves.
    pub split_node: Option<Node>,
    pub branch_count: usize,
    /// Lexicographically smallest branch reaching this entry.
    pub first_branch: Branch,
}

impl TrieEntry {
    pub fn is_leaf(&self) -> bool {
        self.split_node.is_none()
    }

    pub fn trie_level(&self) -> usize {
        trie_level(self.index)
    }
}

pub fn trie_level(index: u64) -> usize {
    63 - index.leading_zeros() as usize
}

#[derive(Clone, Debug, Serialize)]
pub struct SplittingTree {
    depth: usize,
    options_min_count: usize,
    entries: BTreeMap<u64, TrieEntry>,
}

pub fn build_splitting_tree(branches: &[Branch]) -> Result<SplittingTree> {
    build_splitting_tree_with(branches, SplitOptions::default())
}

pub fn build_splitting_tree_with(branches: &[Branch], opts: SplitOptions) -> Result<SplittingTree> {
    if branches.is_empty() {
        return Err(Error::EmptyInput);
    }
    if opts.min_count == 0 {
        return Err(Error::InvalidArgument(
            "min_count must be at least 1".into(),
        ));
    }
    let depth = validate_branches(branches)?;
    let mut sorted = branches.to_vec();
    sorted.sort();
    let mut tree = SplittingTree {
        depth,
        options_min_count: opts.min_count,
        entries: BTreeMap::new(),
    };
    // explicit stack: (index, t_node, members)
    let mut stack: Vec<(u64, Node, &[Branch])> = vec![(1, Node::root(), &sorted[..])];
    while let Some((index, t, members)) = stack.pop() {
        let (split, kept) = find_split(t, members, depth, opts);
        tree.entries.insert(
            index,
            TrieEntry {
                index,
                t_node: t,
                split_node: split,
                branch_count: members.len(),
                first_branch: members[0],
            },
        );
        if let Some(s) = split {
            let cut = kept.partition_point(|b| b.end().bit(s.level()) == 0);
            stack.push((2 * index + 1, s.child(1)?, &kept[cut..]));
            stack.push((2 * index, s.child(0)?, &kept[..cut]));
        }
    }
    Ok(tree)
}

/// Walks down from `t` until both successors are heavy enough.
/// `members` is sorted, so every successor's branches form a contiguous run.
fn find_split(
    t: Node,
    members: &[Branch],
    depth: usize,
    opts: SplitOptions,
) -> (Option<Node>, &[Branch]) {
    let mut cur = t;
    let mut kept = members;
    while cur.level() < depth {
        if opts.level_cap.is_some_and(|cap| cur.level() >= cap) {
            return (None, kept);
        }
        let cut = kept.partition_point(|b| b.end().bit(cur.level()) == 0);
        let (zero, one) = kept.split_at(cut);
        let heavy0 = zero.len() >= opts.min_count;
        let heavy1 = one.len() >= opts.min_count;
        match (heavy0, heavy1) {
            (true, true) => return (Some(cur), kept),
            (true, false) => kept = zero,
            (false, true) => kept = one,
            (false, false) => return (None, kept),
        }
        cur = cur.child(if heavy0 { 0 } else { 1 }).expect("below depth");
    }
    (None, kept)
}

impl SplittingTree {
    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn entries(&self) -> impl Iterator<Item = &TrieEntry> {
        self.entries.values()
    }

    pub fn entry(&self, index: u64) -> Option<&TrieEntry> {
        self.entries.get(&index)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn leaves(&self) -> impl Iterator<Item = &TrieEntry> {
        self.entries.values().filter(|e| e.is_leaf())
    }

    /// Whether all `2^level` entries of trie level `level` exist.
    pub fn level_complete(&self, level: usize) -> bool {
        if level >= 63 {
            return false;
        }
        let lo = 1u64 << level;
        let hi = 1u64 << (level + 1);
        self.entries.range(lo..hi).count() as u64 == hi - lo
    }

    /// Deepest trie level.
    pub fn height(&self) -> usize {
        self.entries
            .keys()
            .map(|&i| trie_level(i))
            .max()
            .unwrap_or(0)
    }

    /// The leaf a branch ends up in, if it was kept.
    pub fn route(&self, branch: &Branch) -> Option<u64> {
        let mut index = 1u64;
        loop {
            let e = self.entries.get(&index)?;
            if !branch.passes_through(&e.t_node) {
                return None;
            }
            match e.split_node {
                None => return Some(index),
                Some(s) => {
                    if !branch.passes_through(&s) {
                        return None;
                    }
                    index = 2 * index + branch.end().bit(s.level()) as u64;
                }
            }
        }
    }

    /// Structural checks: successor relation, counts, and positivity.
    pub fn check_invariants(&self) -> std::result::Result<(), String> {
        for e in self.entries.values() {
            if e.branch_count == 0 {
                return Err(format!("entry {} is empty", e.index));
            }
            let Some(s) = e.split_node else { continue };
            if !e.t_node.is_ancestor_of(&s) {
                return Err(format!("t_{} = {} is not ≤ s = {}", e.index, e.t_node, s));
            }
            let (Some(l), Some(r)) = (self.entry(2 * e.index), self.entry(2 * e.index + 1)) else {
                return Err(format!("internal entry {} lacks children", e.index));
            };
            if l.t_node.parent() != Some(s) || r.t_node.parent() != Some(s) || l.t_node == r.t_node
            {
                return Err(format!(
                    "children of entry {} are not successors of {s}",
                    e.index
                ));
            }
            let sum = l.branch_count + r.branch_count;
            let ok = if self.options_min_count == 1 {
                sum == e.branch_count
            } else {
                sum <= e.branch_count
            };
            if !ok {
                return Err(format!("count mismatch at entry {}", e.index));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn branches(v: &[&str]) -> Vec<Branch> {
        v.iter()
            .map(|s| Branch::parse(s, s.len()).unwrap())
            .collect()
    }

    fn n(s: &str) -> Node {
        s.parse().unwrap()
    }

    #[test]
    fn full_binary_set() {
        let t = build_splitting_tree(&branches(&["00", "01", "10", "11"])).unwrap();
        t.check_invariants().unwrap();
        assert_eq!(t.len(), 7);
        assert_eq!(t.height(), 2);
        assert_eq!(t.entry(1).unwrap().split_node, Some(n("")));
        assert_eq!(t.entry(2).unwrap().split_node, Some(n("0")));
        assert_eq!(t.entry(3).unwrap().split_node, Some(n("1")));
        assert!(t.leaves().all(|e| e.branch_count == 1));
        assert!(t.level_complete(2));
    }

    #[test]
    fn lopsided_set() {
        let t = build_splitting_tree(&branches(&["000", "001", "011"])).unwrap();
        t.check_invariants().unwrap();
        let root = t.entry(1).unwrap();
        assert_eq!(
            (root.t_node, root.split_node, root.branch_count),
            (n(""), Some(n("0")), 3)
        );
        let left = t.entry(2).unwrap();
        assert_eq!(
            (left.t_node, left.split_node, left.branch_count),
            (n("00"), Some(n("00")), 2)
        );
        let right = t.entry(3).unwrap();
        assert_eq!(
            (right.t_node, right.split_node, right.branch_count),
            (n("01"), None, 1)
        );
        assert!(!t.level_complete(2));
    }

    #[test]
    fn single_branch() {
        let t = build_splitting_tree(&branches(&["0110"])).unwrap();
        assert_eq!(t.len(), 1);
        let e = t.entry(1).unwrap();
        assert!(e.is_leaf());
        assert_eq!(e.branch_count, 1);
        assert!(matches!(build_splitting_tree(&[]), Err(Error::EmptyInput)));
    }

    #[test]
    fn routing() {
        let bs = branches(&["0000", "0011", "0110", "1010", "1011"]);
        let t = build_splitting_tree(&bs).unwrap();
        let mut leaves: Vec<u64> = bs.iter().map(|b| t.route(b).unwrap()).collect();
        leaves.sort();
        leaves.dedup();
        assert_eq!(leaves.len(), bs.len());
    }

    #[test]
    fn thresholds() {
        let bs = branches(&["000", "001", "010", "011", "100"]);
        let t = build_splitting_tree_with(
            &bs,
            SplitOptions {
                min_count: 2,
                level_cap: None,
            },
        )
        .unwrap();
        t.check_invariants().unwrap();
        // "1" holds a single branch, so the root walks into "0" first.
        assert_eq!(t.entry(1).unwrap().split_node, Some(n("0")));
        assert_eq!(t.entry(1).unwrap().branch_count, 5);
        let capped = build_splitting_tree_with(
            &bs,
            SplitOptions {
                min_count: 1,
                level_cap: Some(1),
            },
        )
        .unwrap();
        assert!(capped.entry(2).unwrap().is_leaf());
        assert_eq!(capped.entry(2).unwrap().branch_count, 4);
    }
}
