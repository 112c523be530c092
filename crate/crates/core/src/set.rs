//! Fixed-width element sets over a finite carrier.

use std::fmt;

use fixedbitset::FixedBitSet;

/// A subset of a finite carrier, stored as a bitset whose width equals the
/// carrier size.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ElementSet {
    bits: FixedBitSet,
}

impl ElementSet {
    pub fn empty(width: usize) -> Self {
        Self {
            bits: FixedBitSet::with_capacity(width),
        }
    }

    pub fn full(width: usize) -> Self {
        let mut bits = FixedBitSet::with_capacity(width);
        bits.insert_range(..);
        Self { bits }
    }

    pub fn singleton(width: usize, x: usize) -> Self {
        let mut s = Self::empty(width);
        s.insert(x);
        s
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(width: usize, items: I) -> Self {
        let mut s = Self::empty(width);
        for x in items {
            s.insert(x);
        }
        s
    }

    /// Builds a set from the low `width` bits of a mask (`width <= 64`).
    pub fn from_mask(width: usize, mask: u64) -> Self {
        debug_assert!(width <= 64);
        Self::from_indices(width, (0..width).filter(|i| mask >> i & 1 == 1))
    }

    pub fn width(&self) -> usize {
        self.bits.len()
    }

    pub fn insert(&mut self, x: usize) {
        self.bits.insert(x);
    }

    pub fn remove(&mut self, x: usize) {
        self.bits.set(x, false);
    }

    pub fn contains(&self, x: usize) -> bool {
        self.bits.contains(x)
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_clear()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits.ones()
    }

    pub fn first(&self) -> Option<usize> {
        self.bits.ones().next()
    }

    pub fn is_subset(&self, other: &ElementSet) -> bool {
        self.bits.is_subset(&other.bits)
    }

    pub fn union_with(&mut self, other: &ElementSet) {
        self.bits.union_with(&other.bits);
    }

    pub fn intersect_with(&mut self, other: &ElementSet) {
        self.bits.intersect_with(&other.bits);
    }

    pub fn difference_with(&mut self, other: &ElementSet) {
        self.bits.difference_with(&other.bits);
    }

    pub fn union(&self, other: &ElementSet) -> ElementSet {
        let mut s = self.clone();
        s.union_with(other);
        s
    }

    pub fn intersection(&self, other: &ElementSet) -> ElementSet {
        let mut s = self.clone();
        s.intersect_with(other);
        s
    }

    pub fn difference(&self, other: &ElementSet) -> ElementSet {
        let mut s = self.clone();
        s.difference_with(other);
        s
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }
}

impl fmt::Debug for ElementSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// Iterates every subset of `{0..width}` as an [`ElementSet`]; `width <= 24`.
pub fn all_subsets(width: usize) -> impl Iterator<Item = ElementSet> {
    assert!(width <= 24, "subset enumeration limited to 24 elements");
    (0u64..1 << width).map(move |m| ElementSet::from_mask(width, m))
}

/// Iterates every subset of `base`; `base.len() <= 24`.
pub fn subsets_of(base: &ElementSet) -> impl Iterator<Item = ElementSet> {
    let width = base.width();
    let base = base.to_vec();
    assert!(base.len() <= 24, "subset enumeration limited to 24 elements");
    (0u64..1 << base.len()).map(move |m| {
        ElementSet::from_indices(
            width,
            base.iter()
                .enumerate()
                .filter(|(i, _)| m >> i & 1 == 1)
                .map(|(_, &x)| x),
        )
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_ops() {
        let a = ElementSet::from_indices(5, [0, 2]);
        let b = ElementSet::from_indices(5, [2, 3]);
        assert_eq!(a.union(&b).to_vec(), vec![0, 2, 3]);
        assert_eq!(a.intersection(&b).to_vec(), vec![2]);
        assert!(ElementSet::singleton(5, 2).is_subset(&a));
        assert_eq!(ElementSet::full(5).len(), 5);
        assert_eq!(a.width(), 5);
    }

    #[test]
    fn subset_enumeration_counts() {
        assert_eq!(all_subsets(4).count(), 16);
        let base = ElementSet::from_indices(10, [1, 5, 7]);
        assert_eq!(subsets_of(&base).count(), 8);
        assert!(subsets_of(&base).all(|s| s.width() == 10 && s.is_subset(&base)));
    }
}
