//! A small fixed-universe bitset.
//!
//! Subsets of a finite universe `{0, .., len-1}` backed by `u64` blocks.
//! Product universes (used by the tensor of set Boolean algebras) routinely
//! exceed 64 points, so a single word is not enough; everything else about
//! the workload is tiny, so this stays deliberately simple.

/// A subset of `{0, .., len()-1}`, stored as packed bits.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct BitSet {
    len: usize,
    blocks: Vec<u64>,
}

impl BitSet {
    /// The empty subset of a universe with `len` points.
    pub fn empty(len: usize) -> Self {
        BitSet {
            len,
            blocks: vec![0; len.div_ceil(64)],
        }
    }

    /// The full universe with `len` points.
    pub fn full(len: usize) -> Self {
        let mut s = Self::empty(len);
        for b in &mut s.blocks {
            *b = !0;
        }
        s.mask_tail();
        s
    }

    /// The singleton `{i}` inside a universe with `len` points.
    pub fn singleton(len: usize, i: usize) -> Self {
        let mut s = Self::empty(len);
        s.insert(i);
        s
    }

    /// Builds a subset of a `len`-point universe from an iterator of points.
    pub fn from_indices<I: IntoIterator<Item = usize>>(len: usize, iter: I) -> Self {
        let mut s = Self::empty(len);
        for i in iter {
            s.insert(i);
        }
        s
    }

    /// Size of the universe (not the subset).
    pub fn len(&self) -> usize {
        self.len
    }

    /// True if the subset has no points.
    pub fn is_empty(&self) -> bool {
        self.blocks.iter().all(|&b| b == 0)
    }

    /// Number of points in the subset.
    pub fn count(&self) -> usize {
        self.blocks.iter().map(|b| b.count_ones() as usize).sum()
    }

    /// Adds a point. Panics if `i` is outside the universe.
    pub fn insert(&mut self, i: usize) {
        assert!(i < self.len, "point {i} outside universe of size {}", self.len);
        self.blocks[i / 64] |= 1 << (i % 64);
    }

    /// Removes a point. Panics if `i` is outside the universe.
    pub fn remove(&mut self, i: usize) {
        assert!(i < self.len, "point {i} outside universe of size {}", self.len);
        self.blocks[i / 64] &= !(1 << (i % 64));
    }

    /// Membership test. Panics if `i` is outside the universe.
    pub fn contains(&self, i: usize) -> bool {
        assert!(i < self.len, "point {i} outside universe of size {}", self.len);
        self.blocks[i / 64] >> (i % 64) & 1 == 1
    }

    /// Union. Panics if the universes differ.
    pub fn union(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a | b)
    }

    /// Intersection. Panics if the universes differ.
    pub fn intersect(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a & b)
    }

    /// Set difference `self \ other`. Panics if the universes differ.
    pub fn difference(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a & !b)
    }

    /// Complement within the universe.
    pub fn complement(&self) -> Self {
        let mut s = BitSet {
            len: self.len,
            blocks: self.blocks.iter().map(|&b| !b).collect(),
        };
        s.mask_tail();
        s
    }

    /// True if every point of `self` lies in `other`.
    pub fn is_subset(&self, other: &Self) -> bool {
        assert_eq!(self.len, other.len, "universe size mismatch");
        self.blocks
            .iter()
            .zip(&other.blocks)
            .all(|(a, b)| a & !b == 0)
    }

    /// True if the two subsets share no point.
    pub fn is_disjoint(&self, other: &Self) -> bool {
        assert_eq!(self.len, other.len, "universe size mismatch");
        self.blocks.iter().zip(&other.blocks).all(|(a, b)| a & b == 0)
    }

    /// Iterates over the points of the subset in increasing order.
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(move |&i| self.blocks[i / 64] >> (i % 64) & 1 == 1)
    }

    fn zip_with(&self, other: &Self, f: impl Fn(u64, u64) -> u64) -> Self {
        assert_eq!(self.len, other.len, "universe size mismatch");
        BitSet {
            len: self.len,
            blocks: self
                .blocks
                .iter()
                .zip(&other.blocks)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        }
    }

    fn mask_tail(&mut self) {
        let rem = self.len % 64;
        if rem != 0 {
            if let Some(last) = self.blocks.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
        if self.len == 0 {
            self.blocks.clear();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_set_operations() {
        let a = BitSet::from_indices(70, [0, 3, 64, 69]);
        let b = BitSet::from_indices(70, [3, 10, 69]);
        assert_eq!(a.count(), 4);
        assert!(a.contains(64) && !a.contains(65));
        assert_eq!(a.intersect(&b), BitSet::from_indices(70, [3, 69]));
        assert_eq!(a.union(&b), BitSet::from_indices(70, [0, 3, 10, 64, 69]));
        assert_eq!(a.difference(&b), BitSet::from_indices(70, [0, 64]));
        assert!(BitSet::from_indices(70, [3, 69]).is_subset(&a));
        assert!(!a.is_subset(&b));
    }

    #[test]
    fn complement_respects_universe_boundary() {
        let a = BitSet::from_indices(67, [0, 66]);
        let c = a.complement();
        assert_eq!(c.count(), 65);
        assert!(a.is_disjoint(&c));
        assert_eq!(a.union(&c), BitSet::full(67));
        // Complementing twice returns the original set, so no stray tail bits.
        assert_eq!(c.complement(), a);
    }

    #[test]
    fn iter_lists_points_in_order() {
        let a = BitSet::from_indices(130, [5, 64, 129]);
        assert_eq!(a.iter().collect::<Vec<_>>(), vec![5, 64, 129]);
        assert!(BitSet::empty(130).is_empty());
        assert_eq!(BitSet::full(0).count(), 0);
    }
}
