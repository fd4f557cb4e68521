//! Subsets of the points of one finite space.

use std::cmp::Ordering;
use std::fmt;

use smallvec::{smallvec, SmallVec};

use crate::error::{Error, Result};

/// Structural fingerprint of a space: equal for spaces with identical labels
/// and topology.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SpaceId(pub(crate) u64);

type Words = SmallVec<[u64; 2]>;

/// A set of point indices bound to a single space.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PointSet {
    space: SpaceId,
    len: usize,
    words: Words,
}

fn word_count(len: usize) -> usize {
    len.div_ceil(64)
}

impl PointSet {
    pub(crate) fn empty_in(space: SpaceId, len: usize) -> Self {
        PointSet {
            space,
            len,
            words: smallvec![0; word_count(len)],
        }
    }

    pub(crate) fn full_in(space: SpaceId, len: usize) -> Self {
        let mut s = Self::empty_in(space, len);
        for i in 0..len {
            s.insert(i);
        }
        s
    }

    pub(crate) fn from_indices_in<I: IntoIterator<Item = usize>>(
        space: SpaceId,
        len: usize,
        indices: I,
    ) -> Self {
        let mut s = Self::empty_in(space, len);
        for i in indices {
            s.insert(i);
        }
        s
    }

    /// Identifier of the owning space.
    pub fn space(&self) -> SpaceId {
        self.space
    }

    /// Number of points of the owning space.
    pub fn universe(&self) -> usize {
        self.len
    }

    pub fn contains(&self, i: usize) -> bool {
        i < self.len && self.words[i / 64] & (1u64 << (i % 64)) != 0
    }

    /// Inserts `i`; panics when out of range.
    pub fn insert(&mut self, i: usize) -> bool {
        assert!(i < self.len, "point index {i} out of range {}", self.len);
        let w = &mut self.words[i / 64];
        let before = *w;
        *w |= 1u64 << (i % 64);
        before != *w
    }

    pub fn remove(&mut self, i: usize) -> bool {
        if i >= self.len {
            return false;
        }
        let w = &mut self.words[i / 64];
        let before = *w;
        *w &= !(1u64 << (i % 64));
        before != *w
    }

    /// Checked insert used at API boundaries.
    pub fn try_insert(&mut self, i: usize) -> Result<bool> {
        if i >= self.len {
            return Err(Error::IndexOutOfRange {
                index: i,
                len: self.len,
            });
        }
        Ok(self.insert(i))
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|w| *w == 0)
    }

    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn iter(&self) -> Iter<'_> {
        Iter {
            set: self,
            word: 0,
            bits: self.words.first().copied().unwrap_or(0),
        }
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }

    /// Smallest member, if any.
    pub fn first(&self) -> Option<usize> {
        self.iter().next()
    }

    fn same_space(&self, other: &PointSet) -> Result<()> {
        if self.space == other.space && self.len == other.len {
            Ok(())
        } else {
            Err(Error::SpaceMismatch)
        }
    }

    pub fn union(&self, other: &PointSet) -> Result<PointSet> {
        self.same_space(other)?;
        Ok(self.union_unchecked(other))
    }

    pub fn intersection(&self, other: &PointSet) -> Result<PointSet> {
        self.same_space(other)?;
        Ok(self.intersection_unchecked(other))
    }

    pub fn difference(&self, other: &PointSet) -> Result<PointSet> {
        self.same_space(other)?;
        Ok(self.difference_unchecked(other))
    }

    pub fn is_subset(&self, other: &PointSet) -> Result<bool> {
        self.same_space(other)?;
        Ok(self.is_subset_unchecked(other))
    }

    pub fn intersects(&self, other: &PointSet) -> Result<bool> {
        self.same_space(other)?;
        Ok(self.intersects_unchecked(other))
    }

    pub fn complement(&self) -> PointSet {
        let mut out = PointSet::full_in(self.space, self.len);
        for (o, w) in out.words.iter_mut().zip(&self.words) {
            *o &= !w;
        }
        out
    }

    pub(crate) fn union_unchecked(&self, other: &PointSet) -> PointSet {
        debug_assert_eq!(self.space, other.space);
        let mut out = self.clone();
        out.union_with(other);
        out
    }

    pub(crate) fn union_with(&mut self, other: &PointSet) {
        debug_assert_eq!(self.space, other.space);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    pub(crate) fn intersection_unchecked(&self, other: &PointSet) -> PointSet {
        debug_assert_eq!(self.space, other.space);
        let mut out = self.clone();
        for (a, b) in out.words.iter_mut().zip(&other.words) {
            *a &= b;
        }
        out
    }

    pub(crate) fn difference_unchecked(&self, other: &PointSet) -> PointSet {
        debug_assert_eq!(self.space, other.space);
        let mut out = self.clone();
        for (a, b) in out.words.iter_mut().zip(&other.words) {
            *a &= !b;
        }
        out
    }

    pub(crate) fn is_subset_unchecked(&self, other: &PointSet) -> bool {
        debug_assert_eq!(self.space, other.space);
        self.words
            .iter()
            .zip(&other.words)
            .all(|(a, b)| a & !b == 0)
    }

    pub(crate) fn intersects_unchecked(&self, other: &PointSet) -> bool {
        debug_assert_eq!(self.space, other.space);
        self.words.iter().zip(&other.words).any(|(a, b)| a & b != 0)
    }

    /// Rebinds the same index set to another space of equal size.
    pub(crate) fn rebind(&self, space: SpaceId) -> PointSet {
        PointSet {
            space,
            len: self.len,
            words: self.words.clone(),
        }
    }
}

impl Ord for PointSet {
    /// Orders by size first, then lexicographically by member indices.
    fn cmp(&self, other: &Self) -> Ordering {
        self.count()
            .cmp(&other.count())
            .then_with(|| self.iter().cmp(other.iter()))
            .then_with(|| self.space.cmp(&other.space))
    }
}

impl PartialOrd for PointSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for PointSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

pub struct Iter<'a> {
    set: &'a PointSet,
    word: usize,
    bits: u64,
}

impl Iterator for Iter<'_> {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        loop {
            if self.bits != 0 {
                let t = self.bits.trailing_zeros() as usize;
                self.bits &= self.bits - 1;
                return Some(self.word * 64 + t);
            }
            self.word += 1;
            if self.word >= self.set.words.len() {
                return None;
            }
            self.bits = self.set.words[self.word];
        }
    }
}

impl<'a> IntoIterator for &'a PointSet {
    type Item = usize;
    type IntoIter = Iter<'a>;

    fn into_iter(self) -> Iter<'a> {
        self.iter()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const S: SpaceId = SpaceId(1);

    #[test]
    fn basic_membership_across_word_boundary() {
        let mut a = PointSet::empty_in(S, 130);
        assert!(a.insert(0));
        assert!(a.insert(64));
        assert!(a.insert(129));
        assert!(!a.insert(64));
        assert_eq!(a.to_vec(), vec![0, 64, 129]);
        assert_eq!(a.count(), 3);
        assert!(a.remove(64));
        assert_eq!(a.complement().count(), 128);
    }

    #[test]
    fn cross_space_rejected() {
        let a = PointSet::empty_in(S, 3);
        let b = PointSet::empty_in(SpaceId(2), 3);
        assert_eq!(a.union(&b), Err(Error::SpaceMismatch));
        assert_eq!(a.is_subset(&b), Err(Error::SpaceMismatch));
    }

    #[test]
    fn order_is_size_then_lexicographic() {
        let a = PointSet::from_indices_in(S, 4, [2]);
        let b = PointSet::from_indices_in(S, 4, [0, 3]);
        let c = PointSet::from_indices_in(S, 4, [1, 2]);
        let mut v = vec![c.clone(), b.clone(), a.clone()];
        v.sort();
        assert_eq!(v, vec![a, b, c]);
    }

    #[test]
    fn try_insert_out_of_range() {
        let mut a = PointSet::empty_in(S, 2);
        assert!(matches!(a.try_insert(2), Err(Error::IndexOutOfRange { .. })));
    }
}
