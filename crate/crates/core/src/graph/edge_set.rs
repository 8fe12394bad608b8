use std::cmp::Ordering;
use std::fmt;

use fixedbitset::FixedBitSet;
use serde::{Serialize, Serializer};

use super::EdgeId;

/// A set of edge ids of some parent graph; the concrete form of every
/// subgraph (spanner, preserver, forest, fault set) in this crate.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct EdgeSet {
    bits: FixedBitSet,
}

impl EdgeSet {
    pub fn new(m: usize) -> Self {
        EdgeSet {
            bits: FixedBitSet::with_capacity(m),
        }
    }

    pub fn full(m: usize) -> Self {
        let mut bits = FixedBitSet::with_capacity(m);
        bits.insert_range(..);
        EdgeSet { bits }
    }

    pub fn from_ids(m: usize, ids: impl IntoIterator<Item = EdgeId>) -> Self {
        let mut set = Self::new(m);
        for id in ids {
            set.insert(id);
        }
        set
    }

    /// Size of the id universe (the parent's edge count).
    pub fn capacity(&self) -> usize {
        self.bits.len()
    }

    pub fn contains(&self, id: EdgeId) -> bool {
        self.bits.contains(id)
    }

    pub fn insert(&mut self, id: EdgeId) {
        self.bits.insert(id);
    }

    pub fn remove(&mut self, id: EdgeId) {
        self.bits.set(id, false);
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_clear()
    }

    pub fn iter(&self) -> impl Iterator<Item = EdgeId> + '_ {
        self.bits.ones()
    }

    pub fn to_vec(&self) -> Vec<EdgeId> {
        self.iter().collect()
    }

    pub fn is_subset(&self, other: &EdgeSet) -> bool {
        self.bits.is_subset(&other.bits)
    }

    pub fn is_disjoint(&self, other: &EdgeSet) -> bool {
        self.bits.is_disjoint(&other.bits)
    }

    pub fn union(&self, other: &EdgeSet) -> EdgeSet {
        let mut out = self.clone();
        out.bits.union_with(&other.bits);
        out
    }

    pub fn intersection(&self, other: &EdgeSet) -> EdgeSet {
        let mut out = self.clone();
        out.bits.intersect_with(&other.bits);
        out
    }

    pub fn difference(&self, other: &EdgeSet) -> EdgeSet {
        let mut out = self.clone();
        out.bits.difference_with(&other.bits);
        out
    }

    /// Complement within `0..capacity`.
    pub fn complement(&self) -> EdgeSet {
        let mut out = self.clone();
        out.bits.toggle_range(..);
        out
    }

    pub fn without(&self, id: EdgeId) -> EdgeSet {
        let mut out = self.clone();
        out.remove(id);
        out
    }

    pub fn with(&self, id: EdgeId) -> EdgeSet {
        let mut out = self.clone();
        out.insert(id);
        out
    }

    /// Lexicographic order of the ascending id sequences.
    pub fn lex_cmp(&self, other: &EdgeSet) -> Ordering {
        self.iter().cmp(other.iter())
    }
}

impl fmt::Debug for EdgeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl Serialize for EdgeSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_seq(self.iter())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_set_algebra() {
        let a = EdgeSet::from_ids(6, [0, 2, 4]);
        let b = EdgeSet::from_ids(6, [2, 3]);
        assert_eq!(a.union(&b).to_vec(), vec![0, 2, 3, 4]);
        assert_eq!(a.intersection(&b).to_vec(), vec![2]);
        assert_eq!(a.difference(&b).to_vec(), vec![0, 4]);
        assert_eq!(a.complement().to_vec(), vec![1, 3, 5]);
        assert_eq!(EdgeSet::full(3).len(), 3);
        assert!(EdgeSet::new(4).is_empty());
    }

    #[test]
    fn lex_order_compares_sorted_ids() {
        let a = EdgeSet::from_ids(5, [0, 1, 3]);
        let b = EdgeSet::from_ids(5, [0, 2]);
        let c = EdgeSet::from_ids(5, [0, 1]);
        assert_eq!(a.lex_cmp(&b), Ordering::Less);
        assert_eq!(c.lex_cmp(&a), Ordering::Less);
        assert_eq!(a.lex_cmp(&a.clone()), Ordering::Equal);
    }
}
