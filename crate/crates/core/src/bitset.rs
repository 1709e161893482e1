//! Fixed-capacity bit set used for vertex sets and label domains.

use std::fmt;

const WORD_BITS: usize = 64;

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BitSet {
    words: Vec<u64>,
    capacity: usize,
}

impl BitSet {
    pub fn new(capacity: usize) -> Self {
        BitSet {
            words: vec![0; capacity.div_ceil(WORD_BITS)],
            capacity,
        }
    }

    /// A set containing every element of `0..capacity`.
    pub fn full(capacity: usize) -> Self {
        let mut set = Self::new(capacity);
        set.insert_range(0, capacity);
        set
    }

    pub fn from_iter_with_capacity<I: IntoIterator<Item = usize>>(capacity: usize, it: I) -> Self {
        let mut set = Self::new(capacity);
        for x in it {
            set.insert(x);
        }
        set
    }

    #[inline]
    pub fn capacity(&self) -> usize {
        self.capacity
    }

    #[inline]
    pub fn contains(&self, x: usize) -> bool {
        x < self.capacity && self.words[x / WORD_BITS] >> (x % WORD_BITS) & 1 == 1
    }

    #[inline]
    pub fn insert(&mut self, x: usize) {
        debug_assert!(x < self.capacity);
        self.words[x / WORD_BITS] |= 1 << (x % WORD_BITS);
    }

    #[inline]
    pub fn remove(&mut self, x: usize) {
        if x < self.capacity {
            self.words[x / WORD_BITS] &= !(1 << (x % WORD_BITS));
        }
    }

    pub fn clear(&mut self) {
        self.words.iter_mut().for_each(|w| *w = 0);
    }

    /// Inserts every element of the half-open range `lo..hi` (clamped to capacity).
    pub fn insert_range(&mut self, lo: usize, hi: usize) {
        let hi = hi.min(self.capacity);
        if lo >= hi {
            return;
        }
        self.apply_range(lo, hi, |w, mask| *w |= mask);
    }

    /// Removes every element of the half-open range `lo..hi` (clamped to capacity).
    pub fn remove_range(&mut self, lo: usize, hi: usize) {
        let hi = hi.min(self.capacity);
        if lo >= hi {
            return;
        }
        self.apply_range(lo, hi, |w, mask| *w &= !mask);
    }

    fn apply_range(&mut self, lo: usize, hi: usize, f: impl Fn(&mut u64, u64)) {
        let (first, last) = (lo / WORD_BITS, (hi - 1) / WORD_BITS);
        for idx in first..=last {
            let start = if idx == first { lo % WORD_BITS } else { 0 };
            let end = if idx == last { (hi - 1) % WORD_BITS + 1 } else { WORD_BITS };
            let mask = if end - start == WORD_BITS {
                u64::MAX
            } else {
                ((1u64 << (end - start)) - 1) << start
            };
            f(&mut self.words[idx], mask);
        }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Number of elements in `lo..hi`.
    pub fn count_range(&self, lo: usize, hi: usize) -> usize {
        let hi = hi.min(self.capacity);
        if lo >= hi {
            return 0;
        }
        let (first, last) = (lo / WORD_BITS, (hi - 1) / WORD_BITS);
        let mut total = 0;
        for idx in first..=last {
            let start = if idx == first { lo % WORD_BITS } else { 0 };
            let end = if idx == last { (hi - 1) % WORD_BITS + 1 } else { WORD_BITS };
            let mask = if end - start == WORD_BITS {
                u64::MAX
            } else {
                ((1u64 << (end - start)) - 1) << start
            };
            total += (self.words[idx] & mask).count_ones() as usize;
        }
        total
    }

    pub fn min(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(i, w)| i * WORD_BITS + w.trailing_zeros() as usize)
    }

    pub fn max(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .rev()
            .find(|(_, &w)| w != 0)
            .map(|(i, w)| i * WORD_BITS + (WORD_BITS - 1 - w.leading_zeros() as usize))
    }

    /// Smallest element `>= x`.
    pub fn next_at_or_after(&self, x: usize) -> Option<usize> {
        if x >= self.capacity {
            return None;
        }
        let mut idx = x / WORD_BITS;
        let mut word = self.words[idx] & (u64::MAX << (x % WORD_BITS));
        loop {
            if word != 0 {
                return Some(idx * WORD_BITS + word.trailing_zeros() as usize);
            }
            idx += 1;
            if idx >= self.words.len() {
                return None;
            }
            word = self.words[idx];
        }
    }

    /// Largest element `<= x`.
    pub fn prev_at_or_before(&self, x: usize) -> Option<usize> {
        if self.capacity == 0 {
            return None;
        }
        let x = x.min(self.capacity - 1);
        let mut idx = x / WORD_BITS;
        let shift = WORD_BITS - 1 - x % WORD_BITS;
        let mut word = (self.words[idx] << shift) >> shift;
        loop {
            if word != 0 {
                return Some(idx * WORD_BITS + (WORD_BITS - 1 - word.leading_zeros() as usize));
            }
            if idx == 0 {
                return None;
            }
            idx -= 1;
            word = self.words[idx];
        }
    }

    pub fn union_with(&mut self, other: &BitSet) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    pub fn intersect_with(&mut self, other: &BitSet) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= b;
        }
    }

    pub fn difference_with(&mut self, other: &BitSet) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= !b;
        }
    }

    pub fn intersection_len(&self, other: &BitSet) -> usize {
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    pub fn intersects(&self, other: &BitSet) -> bool {
        self.words.iter().zip(&other.words).any(|(a, b)| a & b != 0)
    }

    pub fn is_subset(&self, other: &BitSet) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    pub fn iter(&self) -> Iter<'_> {
        Iter {
            words: &self.words,
            idx: 0,
            current: self.words.first().copied().unwrap_or(0),
        }
    }
}

impl fmt::Debug for BitSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

pub struct Iter<'a> {
    words: &'a [u64],
    idx: usize,
    current: u64,
}

impl Iterator for Iter<'_> {
    type Item = usize;

    #[inline]
    fn next(&mut self) -> Option<usize> {
        loop {
            if self.current != 0 {
                let bit = self.current.trailing_zeros() as usize;
                self.current &= self.current - 1;
                return Some(self.idx * WORD_BITS + bit);
            }
            self.idx += 1;
            if self.idx >= self.words.len() {
                return None;
            }
            self.current = self.words[self.idx];
        }
    }
}

impl<'a> IntoIterator for &'a BitSet {
    type Item = usize;
    type IntoIter = Iter<'a>;

    fn into_iter(self) -> Iter<'a> {
        self.iter()
    }
}
