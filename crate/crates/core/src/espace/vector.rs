use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A finitely supported real sequence indexed by an initial segment of the
/// ordinals, modelled by nonnegative integers. Zero entries are never stored.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct EVector {
    entries: BTreeMap<usize, f64>,
}

impl EVector {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn unit(index: usize) -> Self {
        let mut v = Self::zero();
        v.entries.insert(index, 1.0);
        v
    }

    pub fn from_entries<I: IntoIterator<Item = (usize, f64)>>(entries: I) -> Result<Self> {
        let mut v = Self::zero();
        for (i, x) in entries {
            if !x.is_finite() {
                return Err(Error::InvalidArgument(format!(
                    "non-finite value at index {i}"
                )));
            }
            if v.entries.contains_key(&i) {
                return Err(Error::InvalidArgument(format!("duplicate index {i}")));
            }
            if x != 0.0 {
                v.entries.insert(i, x);
            }
        }
        Ok(v)
    }

    /// Dense constructor: `values[i]` at index `i`.
    pub fn from_dense(values: &[f64]) -> Result<Self> {
        Self::from_entries(values.iter().copied().enumerate())
    }

    pub fn get(&self, index: usize) -> f64 {
        self.entries.get(&index).copied().unwrap_or(0.0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&usize, &f64)> {
        self.entries.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn support_len(&self) -> usize {
        self.entries.len()
    }

    pub fn min_index(&self) -> Option<usize> {
        self.entries.keys().next().copied()
    }

    pub fn max_index(&self) -> Option<usize> {
        self.entries.keys().next_back().copied()
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.values().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn scaled(&self, c: f64) -> EVector {
        EVector {
            entries: self
                .entries
                .iter()
                .map(|(i, v)| (*i, v * c))
                .filter(|(_, v)| *v != 0.0)
                .collect(),
        }
    }

    /// `self + c·other`.
    pub fn add_scaled(&self, other: &EVector, c: f64) -> EVector {
        let mut out = self.clone();
        for (i, v) in &other.entries {
            let w = out.get(*i) + c * v;
            if w == 0.0 {
                out.entries.remove(i);
            } else {
                out.entries.insert(*i, w);
            }
        }
        out
    }

    pub(crate) fn from_map(entries: BTreeMap<usize, f64>) -> EVector {
        EVector {
            entries: entries.into_iter().filter(|(_, v)| *v != 0.0).collect(),
        }
    }
}

/// `sup |Σ_{i∈S} v(i)|` over all index intervals `S`, computed as the
/// diameter `max S_k − min S_k` of the prefix sums (with `S_0 = 0`).
pub fn enorm(v: &EVector) -> f64 {
    let mut s = 0.0f64;
    let (mut hi, mut lo) = (0.0f64, 0.0f64);
    for x in v.entries.values() {
        s += x;
        hi = hi.max(s);
        lo = lo.min(s);
    }
    hi - lo
}

/// Direct maximum over all intervals `[i, j]` of `0..=max index`. Quadratic.
pub fn enorm_oracle(v: &EVector) -> f64 {
    let Some(last) = v.max_index() else {
        return 0.0;
    };
    let mut best = 0.0f64;
    for i in 0..=last {
        let mut sum = 0.0;
        for j in i..=last {
            sum += v.get(j);
            best = best.max(sum.abs());
        }
    }
    best
}

/// `P_η`: keeps the indices below `eta`.
pub fn project(v: &EVector, eta: usize) -> EVector {
    EVector {
        entries: v.entries.range(..eta).map(|(i, x)| (*i, *x)).collect(),
    }
}

#[derive(Serialize, Deserialize)]
struct EntryJson {
    index: usize,
    value: f64,
}

#[derive(Serialize, Deserialize)]
struct EVectorJson {
    entries: Vec<EntryJson>,
}

impl Serialize for EVector {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        EVectorJson {
            entries: self
                .entries
                .iter()
                .map(|(i, v)| EntryJson {
                    index: *i,
                    value: *v,
                })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for EVector {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = EVectorJson::deserialize(d)?;
        EVector::from_entries(raw.entries.into_iter().map(|e| (e.index, e.value)))
            .map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn norm_examples() {
        assert_eq!(enorm(&EVector::unit(0)), 1.0);
        assert_eq!(enorm(&EVector::from_dense(&[1.0, 1.0, 1.0]).unwrap()), 3.0);
        assert_eq!(enorm(&EVector::from_dense(&[1.0, -1.0]).unwrap()), 1.0);
        assert_eq!(enorm(&EVector::zero()), 0.0);
        let v = EVector::from_entries([(3, 2.0), (10, -5.0), (11, 1.0)]).unwrap();
        assert_eq!(enorm(&v), 5.0);
        assert_eq!(enorm_oracle(&v), 5.0);
    }

    #[test]
    fn projection_examples() {
        let v = EVector::from_entries([(0, 1.0), (5, 1.0)]).unwrap();
        assert_eq!(project(&v, 3), EVector::unit(0));
        assert!(project(&v, 0).is_zero());
        assert_eq!(project(&EVector::unit(0), 1), EVector::unit(0));
    }

    #[test]
    fn json_shape() {
        let v = EVector::from_entries([(0, 1.0), (4, -0.5)]).unwrap();
        let s = serde_json::to_string(&v).unwrap();
        assert_eq!(
            s,
            r#"{"entries":[{"index":0,"value":1.0},{"index":4,"value":-0.5}]}"#
        );
        assert_eq!(serde_json::from_str::<EVector>(&s).unwrap(), v);
    }
}
