use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::Node;
use crate::error::{Error, Result};

/// A convex chain of nodes `{s : top ≤ s ≤ bottom}`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Segment {
    top: Node,
    bottom: Node,
}

impl Segment {
    pub fn new(top: Node, bottom: Node) -> Result<Self> {
        if !top.is_ancestor_of(&bottom) {
            return Err(Error::NotASegment { top, bottom });
        }
        Ok(Segment { top, bottom })
    }

    pub fn single(node: Node) -> Self {
        Segment {
            top: node,
            bottom: node,
        }
    }

    pub fn top(&self) -> Node {
        self.top
    }

    pub fn bottom(&self) -> Node {
        self.bottom
    }

    /// Level of the top node (η₁).
    pub fn eta1(&self) -> usize {
        self.top.level()
    }

    /// Level of the bottom node (η₂).
    pub fn eta2(&self) -> usize {
        self.bottom.level()
    }

    pub fn len(&self) -> usize {
        self.eta2() - self.eta1() + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, node: &Node) -> bool {
        self.top.is_ancestor_of(node) && node.is_ancestor_of(&self.bottom)
    }

    pub fn nodes(&self) -> impl Iterator<Item = Node> + '_ {
        (self.eta1()..=self.eta2()).map(move |l| self.bottom.prefix(l))
    }

    /// Direct node-set intersection test.
    pub fn intersects(&self, other: &Segment) -> bool {
        let mine: HashSet<Node> = self.nodes().collect();
        other.nodes().any(|n| mine.contains(&n))
    }
}

impl fmt::Display for Segment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}→{}", self.top, self.bottom)
    }
}

impl fmt::Debug for Segment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Segment({self})")
    }
}

/// Admissibility semantics for families of segments.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Common top level η₁ and common bottom level η₂ with η₁ < η₂.
    Strict,
    /// Common top level; bottoms are free and single-node segments are
    /// allowed. Each segment is regarded as prolonged below the truncation.
    #[default]
    Extended,
}

impl std::str::FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "strict" => Ok(Mode::Strict),
            "extended" => Ok(Mode::Extended),
            _ => Err(Error::Parse(format!("unknown mode {s:?}"))),
        }
    }
}

/// A nonempty family of pairwise disjoint segments sharing their top level.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AdmissibleFamily {
    segments: Vec<Segment>,
    eta1: usize,
    eta2: usize,
    mode: Mode,
}

impl AdmissibleFamily {
    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn eta1(&self) -> usize {
        self.eta1
    }

    /// Common bottom level in strict mode; deepest bottom in extended mode.
    pub fn eta2(&self) -> usize {
        self.eta2
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn len(&self) -> usize {
        self.segments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.segments.is_empty()
    }

    pub fn covers(&self, node: &Node) -> bool {
        self.segments.iter().any(|s| s.contains(node))
    }
}

/// Validates a list of segments as an admissible family.
///
/// Segments with a common top level are disjoint exactly when their tops
/// differ: a shared node at level `ℓ ≥ η₁` forces equal ancestors on `η₁`.
pub fn check_admissible(segments: &[Segment], mode: Mode) -> Result<AdmissibleFamily> {
    let first = segments.first().ok_or(Error::EmptyFamily)?;
    let eta1 = first.eta1();
    let mut eta2 = first.eta2();
    for s in segments {
        if s.eta1() != eta1 {
            return Err(Error::MixedSpan);
        }
        match mode {
            Mode::Strict if s.eta2() != first.eta2() => return Err(Error::MixedSpan),
            _ => eta2 = eta2.max(s.eta2()),
        }
    }
    let mut tops: Vec<(Node, usize)> = segments.iter().map(|s| s.top()).zip(0..).collect();
    tops.sort();
    for w in tops.windows(2) {
        if w[0].0 == w[1].0 {
            return Err(Error::Overlap(w[0].0, w[1].0));
        }
    }
    if mode == Mode::Strict && eta1 == eta2 {
        return Err(Error::DegenerateSpan);
    }
    Ok(AdmissibleFamily {
        segments: segments.to_vec(),
        eta1,
        eta2,
        mode,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seg(top: &str, bottom: &str) -> Segment {
        Segment::new(top.parse().unwrap(), bottom.parse().unwrap()).unwrap()
    }

    #[test]
    fn segment_nodes() {
        let s = seg("0", "011");
        let v: Vec<_> = s.nodes().map(|n| n.to_bit_string()).collect();
        assert_eq!(v, ["0", "01", "011"]);
        assert!(s.contains(&"01".parse().unwrap()));
        assert!(!s.contains(&"".parse().unwrap()));
        assert!(Segment::new("1".parse().unwrap(), "01".parse().unwrap()).is_err());
    }

    #[test]
    fn disjoint_subtrees_are_admissible() {
        let fam = check_admissible(&[seg("0", "00"), seg("1", "10")], Mode::Strict).unwrap();
        assert_eq!((fam.eta1(), fam.eta2()), (1, 2));
        assert!(check_admissible(&[seg("0", "00"), seg("1", "10")], Mode::Extended).is_ok());
    }

    #[test]
    fn overlap_detected() {
        let err = check_admissible(&[seg("0", "00"), seg("0", "01")], Mode::Extended);
        assert!(matches!(err, Err(Error::Overlap(..))));
    }

    #[test]
    fn degenerate_span() {
        let err = check_admissible(&[seg("0", "0")], Mode::Strict);
        assert!(matches!(err, Err(Error::DegenerateSpan)));
        assert!(check_admissible(&[seg("0", "0")], Mode::Extended).is_ok());
    }

    #[test]
    fn mixed_span() {
        let fam = [seg("0", "00"), seg("1", "101")];
        assert!(matches!(
            check_admissible(&fam, Mode::Strict),
            Err(Error::MixedSpan)
        ));
        let ext = check_admissible(&fam, Mode::Extended).unwrap();
        assert_eq!(ext.eta2(), 3);
        let tops = [seg("0", "00"), seg("10", "100")];
        assert!(matches!(
            check_admissible(&tops, Mode::Extended),
            Err(Error::MixedSpan)
        ));
        assert!(matches!(
            check_admissible(&[], Mode::Extended),
            Err(Error::EmptyFamily)
        ));
    }
}
