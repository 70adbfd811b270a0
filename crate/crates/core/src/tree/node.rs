use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Deepest level a node may sit on. Bits are packed into a `u64`.
pub const MAX_LEVEL: usize = 64;

#[inline]
fn mask(len: usize) -> u64 {
    if len >= 64 {
        u64::MAX
    } else {
        (1u64 << len) - 1
    }
}

/// A node of the dyadic tree, identified with its bit string.
///
/// Bit `i` of the string (counted from the root) is stored at bit position
/// `i` of `bits`, so a prefix test is a masked comparison and the meet of
/// two nodes falls out of a trailing-zero count.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Node {
    bits: u64,
    len: u8,
}

impl Node {
    pub const fn root() -> Self {
        Node { bits: 0, len: 0 }
    }

    /// Builds a node from an iterator of bits (root first).
    pub fn from_bits<I: IntoIterator<Item = bool>>(bits: I) -> Result<Self> {
        let mut node = Node::root();
        for b in bits {
            node = node.child(b as u8)?;
        }
        Ok(node)
    }

    #[inline]
    pub fn level(&self) -> usize {
        self.len as usize
    }

    #[inline]
    pub fn is_root(&self) -> bool {
        self.len == 0
    }

    /// The `i`-th bit, `i < level`.
    #[inline]
    pub fn bit(&self, i: usize) -> u8 {
        debug_assert!(i < self.level());
        ((self.bits >> i) & 1) as u8
    }

    pub fn bits(&self) -> impl Iterator<Item = u8> + '_ {
        (0..self.level()).map(move |i| self.bit(i))
    }

    /// Successor `s ∪ {bit}`.
    pub fn child(&self, bit: u8) -> Result<Node> {
        if self.level() >= MAX_LEVEL {
            return Err(Error::DepthExceeded {
                level: self.level() + 1,
                depth: MAX_LEVEL,
            });
        }
        Ok(Node {
            bits: self.bits | (((bit & 1) as u64) << self.len),
            len: self.len + 1,
        })
    }

    pub fn children(&self) -> Result<[Node; 2]> {
        Ok([self.child(0)?, self.child(1)?])
    }

    /// The other successor of this node's parent. `None` at the root.
    pub fn sibling(&self) -> Option<Node> {
        if self.is_root() {
            return None;
        }
        let last = self.len as usize - 1;
        Some(Node {
            bits: self.bits ^ (1u64 << last),
            len: self.len,
        })
    }

    pub fn parent(&self) -> Option<Node> {
        if self.is_root() {
            None
        } else {
            Some(self.prefix(self.level() - 1))
        }
    }

    /// The ancestor of this node on `level` (`level <= self.level()`).
    pub fn prefix(&self, level: usize) -> Node {
        let level = level.min(self.level());
        Node {
            bits: self.bits & mask(level),
            len: level as u8,
        }
    }

    /// Iterates over all ancestors including `self`, root first.
    pub fn prefixes(&self) -> impl Iterator<Item = Node> + '_ {
        (0..=self.level()).map(move |l| self.prefix(l))
    }

    /// `self ≤ other` in the initial segment ordering.
    #[inline]
    pub fn is_ancestor_of(&self, other: &Node) -> bool {
        self.len <= other.len && (other.bits & mask(self.level())) == self.bits
    }

    /// Neither node is an ancestor of the other.
    pub fn is_incomparable(&self, other: &Node) -> bool {
        !self.is_ancestor_of(other) && !other.is_ancestor_of(self)
    }

    /// Longest common prefix.
    pub fn meet(&self, other: &Node) -> Node {
        let common = self.level().min(other.level());
        let diff = (self.bits ^ other.bits) & mask(common);
        let lcp = if diff == 0 {
            common
        } else {
            diff.trailing_zeros() as usize
        };
        self.prefix(lcp)
    }

    /// Bit string with the root spelled as the empty string.
    pub fn to_bit_string(&self) -> String {
        self.bits()
            .map(|b| if b == 1 { '1' } else { '0' })
            .collect()
    }

    /// Parses a bit string; `"-"` is accepted as the root for command lines.
    pub fn parse_cli(s: &str) -> Result<Node> {
        if s == "-" {
            Ok(Node::root())
        } else {
            s.parse()
        }
    }

    /// Bit string with the root spelled `-`.
    pub fn to_cli_string(&self) -> String {
        if self.is_root() {
            "-".to_string()
        } else {
            self.to_bit_string()
        }
    }
}

pub fn is_ancestor(a: &Node, b: &Node) -> bool {
    a.is_ancestor_of(b)
}

pub fn meet(a: &Node, b: &Node) -> Node {
    a.meet(b)
}

impl Ord for Node {
    /// Lexicographic order on bit strings; a proper prefix sorts first.
    fn cmp(&self, other: &Self) -> Ordering {
        let m = self.meet(other);
        let l = m.level();
        match (l < self.level(), l < other.level()) {
            (true, true) => self.bit(l).cmp(&other.bit(l)),
            (false, true) => Ordering::Less,
            (true, false) => Ordering::Greater,
            (false, false) => Ordering::Equal,
        }
    }
}

impl PartialOrd for Node {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl FromStr for Node {
    type Err = Error;

    fn from_str(s: &str) -> Result<Node> {
        if s.len() > MAX_LEVEL {
            return Err(Error::DepthExceeded {
                level: s.len(),
                depth: MAX_LEVEL,
            });
        }
        let mut node = Node::root();
        for c in s.chars() {
            let bit = match c {
                '0' => 0,
                '1' => 1,
                _ => return Err(Error::Parse(format!("invalid node string {s:?}"))),
            };
            node = node.child(bit)?;
        }
        Ok(node)
    }
}

impl fmt::Display for Node {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_root() {
            write!(f, "ε")
        } else {
            write!(f, "{}", self.to_bit_string())
        }
    }
}

impl fmt::Debug for Node {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Node({:?})", self.to_bit_string())
    }
}

impl Serialize for Node {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_bit_string())
    }
}

impl<'de> Deserialize<'de> for Node {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A branch of the depth-`d` tree: a bit string of length exactly `d`.
///
/// It stands for the chain of its `d + 1` prefixes, levels `0..=d`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Branch(Node);

impl Branch {
    pub fn new(end: Node) -> Self {
        Branch(end)
    }

    pub fn parse(s: &str, depth: usize) -> Result<Self> {
        let node: Node = s.parse()?;
        if node.level() != depth {
            return Err(Error::Parse(format!(
                "branch {s:?} has length {}, expected {depth}",
                node.level()
            )));
        }
        Ok(Branch(node))
    }

    pub fn depth(&self) -> usize {
        self.0.level()
    }

    /// The deepest node of the branch.
    pub fn end(&self) -> Node {
        self.0
    }

    pub fn node_at(&self, level: usize) -> Node {
        self.0.prefix(level)
    }

    pub fn passes_through(&self, node: &Node) -> bool {
        node.is_ancestor_of(&self.0)
    }

    pub fn nodes(&self) -> impl Iterator<Item = Node> + '_ {
        self.0.prefixes()
    }
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0.to_bit_string())
    }
}

impl fmt::Debug for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Branch({:?})", self.0.to_bit_string())
    }
}

impl Serialize for Branch {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.0.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Branch {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        Node::deserialize(d).map(Branch)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn n(s: &str) -> Node {
        s.parse().unwrap()
    }

    #[test]
    fn ancestor_examples() {
        assert!(is_ancestor(&Node::root(), &n("01")));
        assert!(is_ancestor(&n("0"), &n("01")));
        assert!(!is_ancestor(&n("1"), &n("01")));
        assert!(is_ancestor(&n("01"), &n("01")));
        assert!(n("1").is_incomparable(&n("01")));
    }

    #[test]
    fn meet_examples() {
        assert_eq!(meet(&n("00"), &n("01")), n("0"));
        assert_eq!(meet(&n("0110"), &n("0111")), n("011"));
        assert_eq!(meet(&n("0"), &n("1")), Node::root());
        assert_eq!(meet(&n("01"), &n("0110")), n("01"));
    }

    #[test]
    fn lexicographic_order() {
        let mut v = [n("1"), n("01"), n(""), n("0"), n("00"), n("10")];
        v.sort();
        let s: Vec<_> = v.iter().map(|x| x.to_bit_string()).collect();
        assert_eq!(s, ["", "0", "00", "01", "1", "10"]);
    }

    #[test]
    fn full_width_nodes() {
        let deep = Node::from_bits((0..64).map(|i| i % 3 == 0)).unwrap();
        assert_eq!(deep.level(), 64);
        assert!(deep.child(0).is_err());
        assert_eq!(deep.meet(&deep), deep);
        assert!(deep.prefix(10).is_ancestor_of(&deep));
    }

    #[test]
    fn parse_and_print() {
        assert_eq!(Node::parse_cli("-").unwrap(), Node::root());
        assert_eq!(n("0110").to_bit_string(), "0110");
        assert_eq!(Node::root().to_cli_string(), "-");
        assert!("012".parse::<Node>().is_err());
        assert_eq!(n("10").sibling(), Some(n("11")));
        assert_eq!(n("10").parent(), Some(n("1")));
    }

    #[test]
    fn branch_nodes() {
        let b = Branch::parse("010", 3).unwrap();
        let nodes: Vec<_> = b.nodes().map(|x| x.to_bit_string()).collect();
        assert_eq!(nodes, ["", "0", "01", "010"]);
        assert!(b.passes_through(&n("01")));
        assert!(!b.passes_through(&n("1")));
        assert!(Branch::parse("01", 3).is_err());
    }
}
