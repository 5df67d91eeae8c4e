//! Subsets of a finite carrier, stored as sorted index vectors.
//!
//! Neighborhoods in the spaces this crate handles are small relative to the
//! carrier (products and cover fragments can have many points), so a sorted
//! sparse vector beats a dense bitmask on memory while keeping the set algebra
//! linear-time merges.

use std::cmp::Ordering;
use std::fmt;

/// A set of point indices, kept sorted and free of duplicates.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PointSet(Vec<usize>);

impl PointSet {
    pub fn new() -> Self {
        PointSet(Vec::new())
    }

    pub fn singleton(p: usize) -> Self {
        PointSet(vec![p])
    }

    /// The full range `0..n`.
    pub fn full(n: usize) -> Self {
        PointSet((0..n).collect())
    }

    /// Decodes the low `n` bits of `mask`.
    pub fn from_mask(mask: u64, n: usize) -> Self {
        PointSet((0..n).filter(|i| mask >> i & 1 == 1).collect())
    }

    /// Encodes as a bitmask. Only meaningful when every member is below 64.
    pub fn to_mask(&self) -> u64 {
        self.0.iter().fold(0, |m, &i| m | 1 << i)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, p: usize) -> bool {
        self.0.binary_search(&p).is_ok()
    }

    pub fn insert(&mut self, p: usize) -> bool {
        match self.0.binary_search(&p) {
            Ok(_) => false,
            Err(pos) => {
                self.0.insert(pos, p);
                true
            }
        }
    }

    pub fn iter(&self) -> impl DoubleEndedIterator<Item = usize> + ExactSizeIterator + '_ {
        self.0.iter().copied()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn first(&self) -> Option<usize> {
        self.0.first().copied()
    }

    pub fn last(&self) -> Option<usize> {
        self.0.last().copied()
    }

    pub fn is_subset(&self, other: &PointSet) -> bool {
        if self.len() > other.len() {
            return false;
        }
        let mut it = other.0.iter();
        'outer: for a in &self.0 {
            for b in it.by_ref() {
                match b.cmp(a) {
                    Ordering::Less => continue,
                    Ordering::Equal => continue 'outer,
                    Ordering::Greater => return false,
                }
            }
            return false;
        }
        true
    }

    pub fn union(&self, other: &PointSet) -> PointSet {
        let (a, b) = (&self.0, &other.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    out.push(a[i]);
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        PointSet(out)
    }

    pub fn intersection(&self, other: &PointSet) -> PointSet {
        PointSet(self.0.iter().copied().filter(|&p| other.contains(p)).collect())
    }

    pub fn difference(&self, other: &PointSet) -> PointSet {
        PointSet(self.0.iter().copied().filter(|&p| !other.contains(p)).collect())
    }

    pub fn intersects(&self, other: &PointSet) -> bool {
        self.0.iter().any(|&p| other.contains(p))
    }

    /// Image under an index map, deduplicated.
    pub fn map(&self, f: impl Fn(usize) -> usize) -> PointSet {
        self.0.iter().map(|&p| f(p)).collect()
    }
}

impl FromIterator<usize> for PointSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut v: Vec<usize> = iter.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        PointSet(v)
    }
}

impl Extend<usize> for PointSet {
    fn extend<I: IntoIterator<Item = usize>>(&mut self, iter: I) {
        self.0.extend(iter);
        self.0.sort_unstable();
        self.0.dedup();
    }
}

impl<'a> IntoIterator for &'a PointSet {
    type Item = usize;
    type IntoIter = std::iter::Copied<std::slice::Iter<'a, usize>>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter().copied()
    }
}

impl fmt::Debug for PointSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.0.iter()).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn mask_set(m: u64) -> PointSet {
        PointSet::from_mask(m, 12)
    }

    proptest! {
        #[test]
        fn algebra_matches_bitmasks(a in 0u64..4096, b in 0u64..4096) {
            let (sa, sb) = (mask_set(a), mask_set(b));
            prop_assert_eq!(sa.union(&sb).to_mask(), a | b);
            prop_assert_eq!(sa.intersection(&sb).to_mask(), a & b);
            prop_assert_eq!(sa.difference(&sb).to_mask(), a & !b);
            prop_assert_eq!(sa.is_subset(&sb), a & !b == 0);
            prop_assert_eq!(sa.intersects(&sb), a & b != 0);
        }
    }

    #[test]
    fn insert_keeps_order() {
        let mut s = PointSet::new();
        for p in [5, 1, 3, 1] {
            s.insert(p);
        }
        assert_eq!(s.as_slice(), &[1, 3, 5]);
        assert!(PointSet::new().is_subset(&s));
    }
}
