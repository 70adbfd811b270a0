use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tree::{Branch, Node, Segment, MAX_LEVEL};

/// A finitely supported real function on the nodes of the depth-`d` tree
/// (levels `0..d`). Zero entries are never stored.
#[derive(Clone, Debug, PartialEq)]
pub struct TreeVector {
    depth: usize,
    entries: BTreeMap<Node, f64>,
}

fn check_depth(depth: usize) -> Result<()> {
    if depth == 0 || depth > MAX_LEVEL {
        return Err(Error::InvalidArgument(format!(
            "depth must be in 1..={MAX_LEVEL}, got {depth}"
        )));
    }
    Ok(())
}

impl TreeVector {
    pub fn zero(depth: usize) -> Result<Self> {
        check_depth(depth)?;
        Ok(TreeVector {
            depth,
            entries: BTreeMap::new(),
        })
    }

    /// The unit vector `e_s`.
    pub fn unit(depth: usize, node: Node) -> Result<Self> {
        let mut v = Self::zero(depth)?;
        v.set(node, 1.0)?;
        Ok(v)
    }

    /// Builds a vector from `(node, value)` pairs. Repeated nodes are an error.
    pub fn from_entries<I>(depth: usize, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Node, f64)>,
    {
        let mut v = Self::zero(depth)?;
        let mut seen = std::collections::HashSet::new();
        for (node, value) in entries {
            if !seen.insert(node) {
                return Err(Error::DuplicateNodes(node));
            }
            v.set(node, value)?;
        }
        Ok(v)
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn get(&self, node: &Node) -> f64 {
        self.entries.get(node).copied().unwrap_or(0.0)
    }

    pub fn set(&mut self, node: Node, value: f64) -> Result<()> {
        if node.level() >= self.depth {
            return Err(Error::DepthExceeded {
                level: node.level(),
                depth: self.depth,
            });
        }
        if !value.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "non-finite value at {node}"
            )));
        }
        if value == 0.0 {
            self.entries.remove(&node);
        } else {
            self.entries.insert(node, value);
        }
        Ok(())
    }

    pub fn add_to(&mut self, node: Node, delta: f64) -> Result<()> {
        let v = self.get(&node) + delta;
        self.set(node, v)
    }

    /// Entries in lexicographic node order.
    pub fn iter(&self) -> impl Iterator<Item = (&Node, &f64)> {
        self.entries.iter()
    }

    pub fn support_len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.values().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn scaled(&self, c: f64) -> TreeVector {
        let mut out = TreeVector {
            depth: self.depth,
            entries: BTreeMap::new(),
        };
        for (n, v) in &self.entries {
            let w = v * c;
            if w != 0.0 {
                out.entries.insert(*n, w);
            }
        }
        out
    }

    /// `self + c·other`; the result lives in the deeper of the two trees.
    pub fn add_scaled(&self, other: &TreeVector, c: f64) -> TreeVector {
        let mut out = self.clone();
        out.depth = self.depth.max(other.depth);
        for (n, v) in &other.entries {
            let w = out.get(n) + c * v;
            if w == 0.0 {
                out.entries.remove(n);
            } else {
                out.entries.insert(*n, w);
            }
        }
        out
    }

    /// Re-embeds the vector in a tree of another depth.
    pub fn with_depth(&self, depth: usize) -> Result<TreeVector> {
        check_depth(depth)?;
        if let Some((n, _)) = self.entries.iter().find(|(n, _)| n.level() >= depth) {
            return Err(Error::DepthExceeded {
                level: n.level(),
                depth,
            });
        }
        Ok(TreeVector {
            depth,
            entries: self.entries.clone(),
        })
    }

    /// Keeps only the entries whose level lies in `levels`.
    pub fn restrict_levels(&self, levels: impl std::ops::RangeBounds<usize>) -> TreeVector {
        TreeVector {
            depth: self.depth,
            entries: self
                .entries
                .iter()
                .filter(|(n, _)| levels.contains(&n.level()))
                .map(|(n, v)| (*n, *v))
                .collect(),
        }
    }

    /// Every support node together with all of its ancestors.
    pub fn ancestor_closure(&self) -> std::collections::BTreeSet<Node> {
        let mut out = std::collections::BTreeSet::new();
        for n in self.entries.keys() {
            out.extend(n.prefixes());
        }
        out
    }
}

/// `I*(x)`, the sum of `x` over the nodes of the segment.
pub fn segment_sum(x: &TreeVector, segment: &Segment) -> Result<f64> {
    if segment.eta2() >= x.depth() {
        return Err(Error::DepthExceeded {
            level: segment.eta2(),
            depth: x.depth(),
        });
    }
    Ok(segment.nodes().map(|n| x.get(&n)).sum())
}

/// A finite linear combination `Σ a_B B*` of branch functionals.
#[derive(Clone, Debug, PartialEq)]
pub struct BranchCombo {
    depth: usize,
    terms: BTreeMap<Branch, f64>,
}

impl BranchCombo {
    pub fn new<I>(depth: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Branch, f64)>,
    {
        if depth >= MAX_LEVEL {
            return Err(Error::InvalidArgument(format!(
                "branch length must be below {MAX_LEVEL}, got {depth}"
            )));
        }
        let mut out = BTreeMap::new();
        for (b, a) in terms {
            if b.depth() != depth {
                return Err(Error::DepthMismatch {
                    vector: b.depth(),
                    functional: depth,
                });
            }
            if !a.is_finite() {
                return Err(Error::InvalidArgument(format!(
                    "non-finite coefficient for {b}"
                )));
            }
            if out.contains_key(&b) {
                return Err(Error::DuplicateBranches(b));
            }
            if a != 0.0 {
                out.insert(b, a);
            }
        }
        Ok(BranchCombo { depth, terms: out })
    }

    /// The single functional `B*`.
    pub fn single(branch: Branch) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(branch, 1.0);
        BranchCombo {
            depth: branch.depth(),
            terms,
        }
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Branch, &f64)> {
        self.terms.iter()
    }

    pub fn coeff(&self, b: &Branch) -> f64 {
        self.terms.get(b).copied().unwrap_or(0.0)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// `Σ |a_B|`, the trivial bound on the functional's norm.
    pub fn l1_norm(&self) -> f64 {
        self.terms.values().map(|a| a.abs()).sum()
    }

    pub fn scaled(&self, c: f64) -> BranchCombo {
        BranchCombo {
            depth: self.depth,
            terms: self
                .terms
                .iter()
                .map(|(b, a)| (*b, a * c))
                .filter(|(_, a)| *a != 0.0)
                .collect(),
        }
    }

    /// The natural depth of witness vectors: room for all `d + 1` prefixes.
    pub fn vector_depth(&self) -> usize {
        self.depth + 1
    }

    /// Total coefficient of the branches through `node`, i.e. `f(e_node)`.
    pub fn weight_at(&self, node: &Node) -> f64 {
        self.terms
            .iter()
            .filter(|(b, _)| b.passes_through(node))
            .map(|(_, a)| a)
            .sum()
    }
}

/// Evaluates `Σ a_B B*(x)`.
///
/// `x` may live in a tree of depth `d` or `d + 1`, where `d` is the branch
/// length; deeper vectors have nodes below the branches' ends.
pub fn eval_branch(f: &BranchCombo, x: &TreeVector) -> Result<f64> {
    if x.depth() != f.depth() && x.depth() != f.depth() + 1 {
        return Err(Error::DepthMismatch {
            vector: x.depth(),
            functional: f.depth(),
        });
    }
    let mut total = 0.0;
    for (b, a) in f.terms() {
        let along: f64 = b.nodes().take(x.depth()).map(|n| x.get(&n)).sum();
        total += a * along;
    }
    Ok(total)
}

#[derive(Serialize, Deserialize)]
struct VectorEntryJson {
    node: Node,
    value: f64,
}

#[derive(Serialize, Deserialize)]
struct TreeVectorJson {
    depth: usize,
    entries: Vec<VectorEntryJson>,
}

impl Serialize for TreeVector {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        TreeVectorJson {
            depth: self.depth,
            entries: self
                .entries
                .iter()
                .map(|(n, v)| VectorEntryJson {
                    node: *n,
                    value: *v,
                })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for TreeVector {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = TreeVectorJson::deserialize(d)?;
        TreeVector::from_entries(
            raw.depth,
            raw.entries.into_iter().map(|e| (e.node, e.value)),
        )
        .map_err(serde::de::Error::custom)
    }
}

#[derive(Serialize, Deserialize)]
struct ComboTermJson {
    branch: Branch,
    coeff: f64,
}

#[derive(Serialize, Deserialize)]
struct BranchComboJson {
    depth: usize,
    terms: Vec<ComboTermJson>,
}

impl Serialize for BranchCombo {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        BranchComboJson {
            depth: self.depth,
            terms: self
                .terms
                .iter()
                .map(|(b, a)| ComboTermJson {
                    branch: *b,
                    coeff: *a,
                })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for BranchCombo {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = BranchComboJson::deserialize(d)?;
        BranchCombo::new(
            raw.depth,
            raw.terms.into_iter().map(|t| (t.branch, t.coeff)),
        )
        .map_err(serde::de::Error::custom)
    }
}
