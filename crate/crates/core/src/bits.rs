//! Small set representations shared by the solvers.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// An immutable sorted set of domain indices.
///
/// Cloning is cheap, which matters for protocol trees: the non-speaking
/// player's set is copied unchanged into both children.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct IndexSet(Arc<[u32]>);

impl IndexSet {
    pub fn empty() -> Self {
        IndexSet(Arc::from(Vec::new()))
    }

    pub fn full(len: usize) -> Self {
        IndexSet((0..len as u32).collect::<Vec<_>>().into())
    }

    pub fn from_sorted(v: Vec<u32>) -> Self {
        debug_assert!(v.windows(2).all(|w| w[0] < w[1]));
        IndexSet(v.into())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, i: u32) -> bool {
        self.0.binary_search(&i).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = u32> + '_ {
        self.0.iter().copied()
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }

    pub fn union(&self, other: &IndexSet) -> IndexSet {
        let mut v: Vec<u32> = self.iter().chain(other.iter()).collect();
        v.sort_unstable();
        v.dedup();
        IndexSet(v.into())
    }

    pub fn intersection(&self, other: &IndexSet) -> IndexSet {
        self.iter().filter(|&i| other.contains(i)).collect()
    }

    pub fn difference(&self, other: &IndexSet) -> IndexSet {
        self.iter().filter(|&i| !other.contains(i)).collect()
    }

    pub fn is_disjoint(&self, other: &IndexSet) -> bool {
        self.iter().all(|i| !other.contains(i))
    }

    pub fn is_subset(&self, other: &IndexSet) -> bool {
        self.iter().all(|i| other.contains(i))
    }

    /// Bitmask view for sets whose elements are all below 64.
    pub fn to_mask(&self) -> Option<u64> {
        let mut m = 0u64;
        for i in self.iter() {
            if i >= 64 {
                return None;
            }
            m |= 1 << i;
        }
        Some(m)
    }

    pub fn from_mask(mask: u64) -> Self {
        mask_iter(mask).map(|i| i as u32).collect()
    }
}

impl FromIterator<u32> for IndexSet {
    fn from_iter<T: IntoIterator<Item = u32>>(iter: T) -> Self {
        let mut v: Vec<u32> = iter.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        IndexSet(v.into())
    }
}

impl fmt::Debug for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl Serialize for IndexSet {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.0.as_ref().serialize(s)
    }
}

impl<'de> Deserialize<'de> for IndexSet {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = Vec::<u32>::deserialize(d)?;
        Ok(v.into_iter().collect())
    }
}

/// Iterates the set bit positions of `mask` in increasing order.
pub fn mask_iter(mut mask: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if mask == 0 {
            None
        } else {
            let i = mask.trailing_zeros() as usize;
            mask &= mask - 1;
            Some(i)
        }
    })
}

/// Fixed-universe bitset backed by 64-bit words.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct BitSet {
    len: usize,
    words: Vec<u64>,
}

impl BitSet {
    pub fn new(len: usize) -> Self {
        BitSet { len, words: vec![0; len.div_ceil(64)] }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn insert(&mut self, i: usize) {
        self.words[i / 64] |= 1 << (i % 64);
    }

    pub fn contains(&self, i: usize) -> bool {
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| mask_iter(w).map(move |b| wi * 64 + b))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn index_set_ops() {
        let a: IndexSet = [5, 1, 3, 3].into_iter().collect();
        let b: IndexSet = [3, 4].into_iter().collect();
        assert_eq!(a.as_slice(), &[1, 3, 5]);
        assert_eq!(a.union(&b).as_slice(), &[1, 3, 4, 5]);
        assert_eq!(a.intersection(&b).as_slice(), &[3]);
        assert_eq!(a.difference(&b).as_slice(), &[1, 5]);
        assert!(!a.is_disjoint(&b));
        assert_eq!(IndexSet::from_mask(a.to_mask().unwrap()), a);
    }

    #[test]
    fn bitset_roundtrip() {
        let mut s = BitSet::new(130);
        for i in [0, 63, 64, 129] {
            s.insert(i);
        }
        assert_eq!(s.count(), 4);
        assert_eq!(s.iter().collect::<Vec<_>>(), vec![0, 63, 64, 129]);
        assert!(s.contains(64) && !s.contains(65));
    }
}
