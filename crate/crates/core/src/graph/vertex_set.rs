use std::cmp::Ordering;
use std::fmt;

/// Fixed-width bit set over the vertex positions of one graph.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct VertexSet {
    words: Vec<u64>,
    width: usize,
}

pub(crate) fn word_count(width: usize) -> usize {
    width.div_ceil(64)
}

impl VertexSet {
    pub fn empty(width: usize) -> Self {
        Self {
            words: vec![0; word_count(width)],
            width,
        }
    }

    pub fn full(width: usize) -> Self {
        let mut s = Self::empty(width);
        for i in 0..width {
            s.insert(i);
        }
        s
    }

    pub fn singleton(width: usize, v: usize) -> Self {
        let mut s = Self::empty(width);
        s.insert(v);
        s
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(width: usize, indices: I) -> Self {
        let mut s = Self::empty(width);
        for i in indices {
            s.insert(i);
        }
        s
    }

    /// Builds a set from raw words; bits at or above `width` are dropped.
    pub fn from_words(width: usize, words: &[u64]) -> Self {
        let mut w = words[..word_count(width)].to_vec();
        if !width.is_multiple_of(64) {
            if let Some(last) = w.last_mut() {
                *last &= (1u64 << (width % 64)) - 1;
            }
        }
        Self { words: w, width }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    #[inline]
    pub fn contains(&self, v: usize) -> bool {
        v < self.width && self.words[v / 64] >> (v % 64) & 1 == 1
    }

    #[inline]
    pub fn insert(&mut self, v: usize) {
        assert!(v < self.width, "vertex {v} out of range for width {}", self.width);
        self.words[v / 64] |= 1 << (v % 64);
    }

    #[inline]
    pub fn remove(&mut self, v: usize) {
        if v < self.width {
            self.words[v / 64] &= !(1 << (v % 64));
        }
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn first(&self) -> Option<usize> {
        self.iter().next()
    }

    pub fn complement(&self) -> Self {
        let mut out = self.clone();
        for w in &mut out.words {
            *w = !*w;
        }
        Self::from_words(self.width, &out.words)
    }

    pub fn union_with(&mut self, other: &VertexSet) {
        debug_assert_eq!(self.width, other.width);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= *b;
        }
    }

    pub fn intersect_with(&mut self, other: &VertexSet) {
        debug_assert_eq!(self.width, other.width);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= *b;
        }
    }

    pub fn is_disjoint(&self, other: &VertexSet) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & b == 0)
    }

    pub fn is_subset(&self, other: &VertexSet) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    /// Members in ascending order.
    pub fn iter(&self) -> Members<'_> {
        Members {
            words: &self.words,
            idx: 0,
            cur: self.words.first().copied().unwrap_or(0),
        }
    }
}

pub struct Members<'a> {
    words: &'a [u64],
    idx: usize,
    cur: u64,
}

impl Iterator for Members<'_> {
    type Item = usize;

    #[inline]
    fn next(&mut self) -> Option<usize> {
        loop {
            if self.cur != 0 {
                let bit = self.cur.trailing_zeros() as usize;
                self.cur &= self.cur - 1;
                return Some(self.idx * 64 + bit);
            }
            self.idx += 1;
            if self.idx >= self.words.len() {
                return None;
            }
            self.cur = self.words[self.idx];
        }
    }
}

/// Canonical order: lexicographic over the ascending member sequence,
/// so `{0} < {0,1} < {0,1,2} < {0,2} < {1}`.
impl Ord for VertexSet {
    fn cmp(&self, other: &Self) -> Ordering {
        self.width
            .cmp(&other.width)
            .then_with(|| self.iter().cmp(other.iter()))
    }
}

impl PartialOrd for VertexSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complement_masks_tail_bits() {
        let s = VertexSet::from_indices(70, [0, 65]);
        let c = s.complement();
        assert_eq!(c.len(), 68);
        assert!(!c.contains(0) && !c.contains(65) && c.contains(69));
        assert_eq!(c.words()[1] >> 6, 0);
    }

    #[test]
    fn canonical_order_is_lexicographic_on_members() {
        let a = VertexSet::from_indices(4, [0]);
        let b = VertexSet::from_indices(4, [0, 1]);
        let c = VertexSet::from_indices(4, [0, 1, 2]);
        let d = VertexSet::from_indices(4, [0, 2]);
        let e = VertexSet::from_indices(4, [1]);
        let mut v = vec![e.clone(), d.clone(), c.clone(), b.clone(), a.clone()];
        v.sort();
        assert_eq!(v, vec![a, b, c, d, e]);
    }

    #[test]
    fn cardinality_matches_popcount() {
        let s = VertexSet::from_indices(130, [1, 64, 129, 64]);
        assert_eq!(s.len(), 3);
        assert_eq!(s.iter().collect::<Vec<_>>(), vec![1, 64, 129]);
    }
}
