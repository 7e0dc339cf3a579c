//! Small sets of ray indices, stored as a bit mask.
//!
//! Indices are 0-based internally. Every user-facing rendering (display,
//! JSON) is 1-based to match the usual `D_1, ..., D_m` labelling.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Maximum number of rays a fan may carry.
pub const MAX_RAYS: usize = 64;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct RaySet(u64);

impl RaySet {
    pub const EMPTY: RaySet = RaySet(0);

    pub fn from_bits(bits: u64) -> Self {
        RaySet(bits)
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn singleton(i: usize) -> Self {
        debug_assert!(i < MAX_RAYS);
        RaySet(1 << i)
    }

    /// Builds a set from 0-based indices.
    pub fn from_indices<I: IntoIterator<Item = usize>>(indices: I) -> Self {
        indices.into_iter().fold(RaySet::EMPTY, |s, i| s.with(i))
    }

    /// Builds a set from 1-based labels; `None` if a label is zero or too large.
    pub fn from_labels<I: IntoIterator<Item = usize>>(labels: I) -> Option<Self> {
        let mut s = RaySet::EMPTY;
        for l in labels {
            if l == 0 || l > MAX_RAYS {
                return None;
            }
            s = s.with(l - 1);
        }
        Some(s)
    }

    pub fn with(self, i: usize) -> Self {
        RaySet(self.0 | (1 << i))
    }

    pub fn without(self, i: usize) -> Self {
        RaySet(self.0 & !(1 << i))
    }

    pub fn contains(self, i: usize) -> bool {
        i < MAX_RAYS && self.0 & (1 << i) != 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn is_subset(self, other: RaySet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn union(self, other: RaySet) -> RaySet {
        RaySet(self.0 | other.0)
    }

    pub fn intersection(self, other: RaySet) -> RaySet {
        RaySet(self.0 & other.0)
    }

    pub fn difference(self, other: RaySet) -> RaySet {
        RaySet(self.0 & !other.0)
    }

    pub fn is_disjoint(self, other: RaySet) -> bool {
        self.0 & other.0 == 0
    }

    /// Largest index + 1, or 0 for the empty set.
    pub fn bound(self) -> usize {
        MAX_RAYS - self.0.leading_zeros() as usize
    }

    pub fn first(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize)
    }

    /// Ascending 0-based indices.
    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let i = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(i)
            }
        })
    }

    pub fn to_vec(self) -> Vec<usize> {
        self.iter().collect()
    }

    pub fn labels(self) -> Vec<usize> {
        self.iter().map(|i| i + 1).collect()
    }

    /// All subsets of `self`, including the empty set and `self`.
    pub fn subsets(self) -> impl Iterator<Item = RaySet> {
        let full = self.0;
        let mut cur = Some(0u64);
        std::iter::from_fn(move || {
            let s = cur?;
            cur = if s == full { None } else { Some(((s | !full).wrapping_add(1)) & full) };
            Some(RaySet(s))
        })
    }

    /// Canonical ordering: by sorted index list, lexicographically.
    pub fn lex_cmp(self, other: RaySet) -> std::cmp::Ordering {
        self.iter().cmp(other.iter())
    }
}

impl fmt::Display for RaySet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, l) in self.labels().into_iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{l}")?;
        }
        write!(f, "}}")
    }
}

impl fmt::Debug for RaySet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromIterator<usize> for RaySet {
    fn from_iter<T: IntoIterator<Item = usize>>(iter: T) -> Self {
        RaySet::from_indices(iter)
    }
}

impl Serialize for RaySet {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.labels().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for RaySet {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let labels = Vec::<usize>::deserialize(deserializer)?;
        RaySet::from_labels(labels).ok_or_else(|| serde::de::Error::custom("ray label out of range"))
    }
}
