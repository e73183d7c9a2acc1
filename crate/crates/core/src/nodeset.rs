//! Fixed-universe node sets.
//!
//! A `NodeSet` is a bitset over the node identifiers `0..n` of one graph.
//! It backs the informed set I_t, boundaries, and expansion witnesses, so
//! membership tests and unions are the hot operations.

/// Set of node identifiers drawn from a fixed universe `0..n`.
#[derive(Clone, PartialEq, Eq)]
pub struct NodeSet {
    n: u32,
    words: Vec<u64>,
    len: u32,
}

impl NodeSet {
    /// Empty set over universe `0..n`.
    pub fn new(n: u32) -> Self {
        NodeSet {
            n,
            words: vec![0; Self::word_count(n)],
            len: 0,
        }
    }

    /// Full set `{0, .., n-1}`.
    pub fn full(n: u32) -> Self {
        let mut s = NodeSet {
            n,
            words: vec![!0u64; Self::word_count(n)],
            len: n,
        };
        s.mask_tail();
        s
    }

    pub fn singleton(n: u32, v: u32) -> Self {
        let mut s = NodeSet::new(n);
        s.insert(v);
        s
    }

    pub fn from_members<I: IntoIterator<Item = u32>>(n: u32, members: I) -> Self {
        let mut s = NodeSet::new(n);
        for v in members {
            s.insert(v);
        }
        s
    }

    fn word_count(n: u32) -> usize {
        (n as usize).div_ceil(64)
    }

    fn mask_tail(&mut self) {
        let rem = (self.n % 64) as u64;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }

    /// Universe size n (not the cardinality).
    pub fn universe(&self) -> u32 {
        self.n
    }

    /// Number of members.
    pub fn len(&self) -> u32 {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn contains(&self, v: u32) -> bool {
        debug_assert!(v < self.n);
        self.words[(v / 64) as usize] & (1u64 << (v % 64)) != 0
    }

    /// Inserts `v`; returns true if it was not already present.
    #[inline]
    pub fn insert(&mut self, v: u32) -> bool {
        debug_assert!(v < self.n);
        let w = &mut self.words[(v / 64) as usize];
        let bit = 1u64 << (v % 64);
        if *w & bit == 0 {
            *w |= bit;
            self.len += 1;
            true
        } else {
            false
        }
    }

    /// Removes `v`; returns true if it was present.
    pub fn remove(&mut self, v: u32) -> bool {
        debug_assert!(v < self.n);
        let w = &mut self.words[(v / 64) as usize];
        let bit = 1u64 << (v % 64);
        if *w & bit != 0 {
            *w &= !bit;
            self.len -= 1;
            true
        } else {
            false
        }
    }

    pub fn clear(&mut self) {
        self.words.fill(0);
        self.len = 0;
    }

    fn recount(&mut self) {
        self.len = self.words.iter().map(|w| w.count_ones()).sum();
    }

    pub fn union_with(&mut self, other: &NodeSet) {
        assert_eq!(self.n, other.n, "sets over different universes");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
        self.recount();
    }

    pub fn intersect_with(&mut self, other: &NodeSet) {
        assert_eq!(self.n, other.n, "sets over different universes");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= b;
        }
        self.recount();
    }

    pub fn difference_with(&mut self, other: &NodeSet) {
        assert_eq!(self.n, other.n, "sets over different universes");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= !b;
        }
        self.recount();
    }

    pub fn complement(&self) -> NodeSet {
        let mut out = NodeSet {
            n: self.n,
            words: self.words.iter().map(|w| !w).collect(),
            len: 0,
        };
        out.mask_tail();
        out.len = self.n - self.len;
        out
    }

    pub fn intersection_count(&self, other: &NodeSet) -> u32 {
        assert_eq!(self.n, other.n, "sets over different universes");
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones())
            .sum()
    }

    pub fn is_disjoint(&self, other: &NodeSet) -> bool {
        self.intersection_count(other) == 0
    }

    pub fn is_subset_of(&self, other: &NodeSet) -> bool {
        assert_eq!(self.n, other.n, "sets over different universes");
        self.words
            .iter()
            .zip(&other.words)
            .all(|(a, b)| a & !b == 0)
    }

    /// Iterates members in increasing order.
    pub fn iter(&self) -> Iter<'_> {
        Iter {
            words: &self.words,
            word_idx: 0,
            current: self.words.first().copied().unwrap_or(0),
        }
    }

    /// Members as a sorted vector.
    pub fn to_vec(&self) -> Vec<u32> {
        self.iter().collect()
    }
}

impl Default for NodeSet {
    fn default() -> Self {
        NodeSet::new(0)
    }
}

impl std::fmt::Debug for NodeSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl<'a> IntoIterator for &'a NodeSet {
    type Item = u32;
    type IntoIter = Iter<'a>;
    fn into_iter(self) -> Iter<'a> {
        self.iter()
    }
}

pub struct Iter<'a> {
    words: &'a [u64],
    word_idx: usize,
    current: u64,
}

impl Iterator for Iter<'_> {
    type Item = u32;

    fn next(&mut self) -> Option<u32> {
        while self.current == 0 {
            self.word_idx += 1;
            if self.word_idx >= self.words.len() {
                return None;
            }
            self.current = self.words[self.word_idx];
        }
        let bit = self.current.trailing_zeros();
        self.current &= self.current - 1;
        Some(self.word_idx as u32 * 64 + bit)
    }
}
