//! Strictly increasing finite sets of naturals.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A finite set of naturals stored as a strictly increasing sequence.
///
/// The wire form is a bracketed list, e.g. `[2,3,4]`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FinSet(Vec<u64>);

impl FinSet {
    /// Validates strict increase; duplicates and disorder are rejected.
    pub fn new(elements: Vec<u64>) -> Result<Self> {
        if let Some(w) = elements.windows(2).find(|w| w[0] >= w[1]) {
            return Err(Error::InvalidSet(format!(
                "elements must be strictly increasing ({} then {})",
                w[0], w[1]
            )));
        }
        Ok(FinSet(elements))
    }

    /// Sorts and deduplicates arbitrary input.
    pub fn from_unsorted<I: IntoIterator<Item = u64>>(items: I) -> Self {
        let mut v: Vec<u64> = items.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        FinSet(v)
    }

    pub fn empty() -> Self {
        FinSet(Vec::new())
    }

    /// The interval `[lo, hi]`; empty when `lo > hi`.
    pub fn interval(lo: u64, hi: u64) -> Self {
        if lo > hi {
            FinSet::empty()
        } else {
            FinSet((lo..=hi).collect())
        }
    }

    pub(crate) fn from_sorted_unchecked(v: Vec<u64>) -> Self {
        debug_assert!(v.windows(2).all(|w| w[0] < w[1]));
        FinSet(v)
    }

    pub fn as_slice(&self) -> &[u64] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<u64> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn min(&self) -> Option<u64> {
        self.0.first().copied()
    }

    pub fn max(&self) -> Option<u64> {
        self.0.last().copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = u64> + '_ {
        self.0.iter().copied()
    }

    pub fn contains(&self, x: u64) -> bool {
        self.0.binary_search(&x).is_ok()
    }

    pub fn is_subset(&self, other: &FinSet) -> bool {
        self.0.iter().all(|&x| other.contains(x))
    }

    /// Elements at the given positions (positions must be increasing).
    pub fn select(&self, positions: &[usize]) -> FinSet {
        FinSet(positions.iter().map(|&p| self.0[p]).collect())
    }

    /// Set union.
    pub fn union(&self, other: &FinSet) -> FinSet {
        FinSet::from_unsorted(self.iter().chain(other.iter()))
    }

    /// `self < other` in the block sense: every element below every element.
    pub fn precedes(&self, other: &FinSet) -> bool {
        match (self.max(), other.min()) {
            (Some(a), Some(b)) => a < b,
            _ => true,
        }
    }
}

impl fmt::Display for FinSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{x}")?;
        }
        f.write_str("]")
    }
}

impl FromStr for FinSet {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let v: Vec<u64> = serde_json::from_str(s.trim())
            .map_err(|e| Error::InvalidSet(format!("expected a list like [2,3,4]: {e}")))?;
        FinSet::new(v)
    }
}

impl Serialize for FinSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.0.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for FinSet {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let v = Vec::<u64>::deserialize(deserializer)?;
        FinSet::new(v).map_err(serde::de::Error::custom)
    }
}

impl<'a> IntoIterator for &'a FinSet {
    type Item = &'a u64;
    type IntoIter = std::slice::Iter<'a, u64>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}
