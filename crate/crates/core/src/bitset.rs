//! Fixed-capacity vertex sets stored as `u64` words.

use std::fmt;

#[inline]
pub fn words_for(n: usize) -> usize {
    n.div_ceil(64)
}

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct VertexSet {
    bits: Vec<u64>,
    cap: usize,
}

impl VertexSet {
    pub fn empty(cap: usize) -> VertexSet {
        VertexSet { bits: vec![0; words_for(cap)], cap }
    }

    pub fn full(cap: usize) -> VertexSet {
        let mut s = VertexSet::empty(cap);
        for v in 0..cap {
            s.insert(v);
        }
        s
    }

    pub fn from_iter<I: IntoIterator<Item = usize>>(cap: usize, it: I) -> VertexSet {
        let mut s = VertexSet::empty(cap);
        for v in it {
            s.insert(v);
        }
        s
    }

    pub fn from_words(cap: usize, bits: Vec<u64>) -> VertexSet {
        debug_assert_eq!(bits.len(), words_for(cap));
        VertexSet { bits, cap }
    }

    pub fn capacity(&self) -> usize {
        self.cap
    }

    pub fn words(&self) -> &[u64] {
        &self.bits
    }

    #[inline]
    pub fn insert(&mut self, v: usize) {
        assert!(v < self.cap, "vertex {v} out of range {}", self.cap);
        self.bits[v / 64] |= 1u64 << (v % 64);
    }

    #[inline]
    pub fn remove(&mut self, v: usize) {
        if v < self.cap {
            self.bits[v / 64] &= !(1u64 << (v % 64));
        }
    }

    #[inline]
    pub fn contains(&self, v: usize) -> bool {
        v < self.cap && (self.bits[v / 64] >> (v % 64)) & 1 == 1
    }

    pub fn len(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.iter().all(|&w| w == 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        iter_words(&self.bits)
    }

    /// Number of members also set in `row`.
    pub fn count_and(&self, row: &[u64]) -> usize {
        self.bits.iter().zip(row).map(|(a, b)| (a & b).count_ones() as usize).sum()
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// Iterates the set bits of a word slice in increasing order.
pub fn iter_words(words: &[u64]) -> impl Iterator<Item = usize> + '_ {
    words.iter().enumerate().flat_map(|(i, &w)| {
        let mut w = w;
        std::iter::from_fn(move || {
            if w == 0 {
                None
            } else {
                let t = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(i * 64 + t)
            }
        })
    })
}

#[inline]
pub fn test_bit(words: &[u64], v: usize) -> bool {
    (words[v / 64] >> (v % 64)) & 1 == 1
}

#[inline]
pub fn set_bit(words: &mut [u64], v: usize) {
    words[v / 64] |= 1u64 << (v % 64);
}

#[inline]
pub fn clear_bit(words: &mut [u64], v: usize) {
    words[v / 64] &= !(1u64 << (v % 64));
}
