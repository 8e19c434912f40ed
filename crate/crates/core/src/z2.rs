//! Dense bit-packed linear algebra over Z2.
//!
//! Everything downstream (boundary tests, basis maintenance, the oracle)
//! reduces to rank / membership / reduction questions over Z2, so this module
//! keeps the representation deliberately boring: a vector is a growable bitset
//! packed into `u64` words, a matrix is a row count plus a list of columns.
//! Elimination uses the low-row pivot convention: the pivot of a nonzero
//! column is its highest set bit, and a reduced matrix has pairwise distinct
//! pivots among its nonzero columns.

use std::collections::HashMap;
use std::fmt;

const WORD_BITS: usize = 64;

/// Growable bitset over Z2. Bits beyond the stored words read as zero, and a
/// `set` past the current capacity grows the vector, so a `BitVec` behaves as
/// a finitely supported vector in an unbounded coordinate space. No trailing
/// zero words are kept, which makes equality and hashing structural.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct BitVec {
    words: Vec<u64>,
}

impl BitVec {
    #[must_use]
    pub fn new() -> Self {
        Self { words: Vec::new() }
    }

    #[must_use]
    pub fn singleton(bit: usize) -> Self {
        let mut v = Self::new();
        v.set(bit);
        v
    }

    pub fn from_bits<I: IntoIterator<Item = usize>>(bits: I) -> Self {
        let mut v = Self::new();
        for b in bits {
            v.set(b);
        }
        v
    }

    #[must_use]
    pub fn get(&self, bit: usize) -> bool {
        match self.words.get(bit / WORD_BITS) {
            Some(w) => w >> (bit % WORD_BITS) & 1 == 1,
            None => false,
        }
    }

    pub fn set(&mut self, bit: usize) {
        let word = bit / WORD_BITS;
        if word >= self.words.len() {
            self.words.resize(word + 1, 0);
        }
        self.words[word] |= 1 << (bit % WORD_BITS);
    }

    pub fn clear(&mut self, bit: usize) {
        if let Some(w) = self.words.get_mut(bit / WORD_BITS) {
            *w &= !(1 << (bit % WORD_BITS));
            self.normalize();
        }
    }

    pub fn flip(&mut self, bit: usize) {
        if self.get(bit) {
            self.clear(bit);
        } else {
            self.set(bit);
        }
    }

    pub fn xor_assign(&mut self, other: &BitVec) {
        if other.words.len() > self.words.len() {
            self.words.resize(other.words.len(), 0);
        }
        for (w, o) in self.words.iter_mut().zip(other.words.iter()) {
            *w ^= o;
        }
        self.normalize();
    }

    #[must_use]
    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    #[must_use]
    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Highest set bit, the pivot under the low-row convention.
    #[must_use]
    pub fn max_bit(&self) -> Option<usize> {
        let w = *self.words.last()?;
        Some((self.words.len() - 1) * WORD_BITS + (WORD_BITS - 1 - w.leading_zeros() as usize))
    }

    #[must_use]
    pub fn min_bit(&self) -> Option<usize> {
        for (i, w) in self.words.iter().enumerate() {
            if *w != 0 {
                return Some(i * WORD_BITS + w.trailing_zeros() as usize);
            }
        }
        None
    }

    /// Indices of set bits in increasing order.
    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(i, w)| {
            let mut rest = *w;
            std::iter::from_fn(move || {
                if rest == 0 {
                    return None;
                }
                let tz = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                Some(i * WORD_BITS + tz)
            })
        })
    }

    fn normalize(&mut self) {
        while self.words.last() == Some(&0) {
            self.words.pop();
        }
    }
}

impl fmt::Debug for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.ones()).finish()
    }
}

// ════════════════════════════════════════════════════════════════════════
// Matrices
// ════════════════════════════════════════════════════════════════════════

/// Column-major matrix over Z2. Row labels (simplices, ordinals) are the
/// caller's business; here rows are just indices `0..rows`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Z2Matrix {
    rows: usize,
    cols: Vec<BitVec>,
}

impl Z2Matrix {
    #[must_use]
    pub fn new(rows: usize) -> Self {
        Self { rows, cols: Vec::new() }
    }

    /// # Panics
    /// Panics if a column has a set bit at or above `rows`.
    #[must_use]
    pub fn with_columns(rows: usize, cols: Vec<BitVec>) -> Self {
        let mut m = Self::new(rows);
        for c in cols {
            m.push_col(c);
        }
        m
    }

    #[must_use]
    pub fn identity(n: usize) -> Self {
        Self::with_columns(n, (0..n).map(BitVec::singleton).collect())
    }

    /// # Panics
    /// Panics if the column has a set bit at or above the row count.
    pub fn push_col(&mut self, col: BitVec) {
        if let Some(top) = col.max_bit() {
            assert!(top < self.rows, "column bit {top} exceeds {} rows", self.rows);
        }
        self.cols.push(col);
    }

    #[must_use]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[must_use]
    pub fn num_cols(&self) -> usize {
        self.cols.len()
    }

    #[must_use]
    pub fn col(&self, j: usize) -> &BitVec {
        &self.cols[j]
    }

    pub fn cols(&self) -> impl Iterator<Item = &BitVec> {
        self.cols.iter()
    }

    /// Matrix-vector product where `x` selects columns by index.
    #[must_use]
    pub fn apply(&self, x: &BitVec) -> BitVec {
        let mut out = BitVec::new();
        for j in x.ones() {
            out.xor_assign(&self.cols[j]);
        }
        out
    }
}

/// One recorded elimination step: column `src` was added into column `dst`.
/// `src < dst` always holds for logs produced by [`col_reduce`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ColOp {
    pub src: usize,
    pub dst: usize,
}

/// Left-to-right column reduction. Returns the reduced matrix, in which every
/// nonzero column has a pivot row no other nonzero column shares, plus the
/// log of column additions sufficient to replay the basis change.
#[must_use]
pub fn col_reduce(m: &Z2Matrix) -> (Z2Matrix, Vec<ColOp>) {
    let mut reduced = m.clone();
    let mut log = Vec::new();
    let mut owner: HashMap<usize, usize> = HashMap::new();
    for j in 0..reduced.cols.len() {
        while let Some(low) = reduced.cols[j].max_bit() {
            match owner.get(&low) {
                None => {
                    owner.insert(low, j);
                    break;
                }
                Some(&k) => {
                    let src = reduced.cols[k].clone();
                    reduced.cols[j].xor_assign(&src);
                    log.push(ColOp { src: k, dst: j });
                }
            }
        }
    }
    (reduced, log)
}

/// Rank via elimination.
#[must_use]
pub fn rank(m: &Z2Matrix) -> usize {
    let mut ech = Echelon::new();
    for c in m.cols() {
        let (r, _) = ech.reduce(c, BitVec::new());
        if !r.is_empty() {
            ech.insert_reduced(r, BitVec::new());
        }
    }
    ech.len()
}

/// Solves `m · x = b`, returning the coefficient vector over column indices,
/// or `None` when `b` lies outside the column span. A zero `b` yields the
/// zero vector.
#[must_use]
pub fn solve_in_span(m: &Z2Matrix, b: &BitVec) -> Option<BitVec> {
    let mut ech = Echelon::new();
    for (j, c) in m.cols().enumerate() {
        let (r, carry) = ech.reduce(c, BitVec::singleton(j));
        if !r.is_empty() {
            ech.insert_reduced(r, carry);
        }
    }
    let (r, x) = ech.reduce(b, BitVec::new());
    if r.is_empty() {
        Some(x)
    } else {
        None
    }
}

// ════════════════════════════════════════════════════════════════════════
// Incremental echelon
// ════════════════════════════════════════════════════════════════════════

/// Column echelon basis maintained incrementally. Each column carries an
/// opaque companion vector (`carry`) that is XORed alongside the value during
/// reduction; callers use it to track provenance of each basis column in
/// whatever coordinate space suits them. Columns keep their insertion order,
/// which downstream tie-breaking relies on.
#[derive(Clone, Debug, Default)]
pub struct Echelon {
    cols: Vec<(BitVec, BitVec)>,
    owner: HashMap<usize, usize>,
}

impl Echelon {
    #[must_use]
    pub fn new() -> Self {
        Self::default()
    }

    #[must_use]
    pub fn len(&self) -> usize {
        self.cols.len()
    }

    #[must_use]
    pub fn is_empty(&self) -> bool {
        self.cols.is_empty()
    }

    #[must_use]
    pub fn columns(&self) -> &[(BitVec, BitVec)] {
        &self.cols
    }

    /// Fully reduces `v` against the basis: every owned pivot row of the
    /// residual is cleared, making the result the canonical coset
    /// representative (and the map linear). Returns the residual together
    /// with the XOR of `seed` and the carries of every basis column used.
    #[must_use]
    pub fn reduce(&self, v: &BitVec, seed: BitVec) -> (BitVec, BitVec) {
        let mut r = v.clone();
        let mut carry = seed;
        let mut pivots: Vec<usize> = self.owner.keys().copied().collect();
        pivots.sort_unstable_by(|a, b| b.cmp(a));
        // A column's pivot is its top row, so cancelling in descending pivot
        // order never re-sets an already cleared owned row.
        for p in pivots {
            if r.get(p) {
                let k = self.owner[&p];
                r.xor_assign(&self.cols[k].0);
                carry.xor_assign(&self.cols[k].1);
            }
        }
        (r, carry)
    }

    /// Appends a fully reduced column.
    ///
    /// # Panics
    /// Panics if the value is zero or its pivot row is already owned.
    pub fn insert_reduced(&mut self, value: BitVec, carry: BitVec) {
        let pivot = value.max_bit().expect("cannot insert a zero column");
        let prev = self.owner.insert(pivot, self.cols.len());
        assert!(prev.is_none(), "pivot row {pivot} already owned");
        self.cols.push((value, carry));
    }

    /// Indices of basis columns whose carry has `bit` set, in column order.
    #[must_use]
    pub fn with_carry_bit(&self, bit: usize) -> Vec<usize> {
        self.cols
            .iter()
            .enumerate()
            .filter(|(_, (_, carry))| carry.get(bit))
            .map(|(i, _)| i)
            .collect()
    }

    /// XORs `relation` into the carry of every column whose carry has `bit`
    /// set. Used to rewrite provenance through a known zero combination; the
    /// column values are untouched.
    pub fn substitute_carry(&mut self, bit: usize, relation: &BitVec) {
        for (_, carry) in &mut self.cols {
            if carry.get(bit) {
                carry.xor_assign(relation);
            }
        }
    }

    /// Folds column `idx` (value and carry) into each column listed in
    /// `into`, removes it, and restores echelon form over the survivors.
    /// The span shrinks by exactly the removed column.
    ///
    /// # Panics
    /// Panics if the surviving columns turn out dependent, which cannot
    /// happen when they were a basis beforehand.
    pub fn fold_and_remove(&mut self, idx: usize, into: &[usize]) {
        let (v, c) = self.cols[idx].clone();
        for &j in into {
            assert_ne!(j, idx);
            self.cols[j].0.xor_assign(&v);
            self.cols[j].1.xor_assign(&c);
        }
        self.cols.remove(idx);
        let cols = std::mem::take(&mut self.cols);
        self.owner.clear();
        for (value, carry) in cols {
            let (r, carry) = self.reduce(&value, carry);
            assert!(!r.is_empty(), "echelon columns must stay independent");
            self.insert_reduced(r, carry);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn bv(bits: &[usize]) -> BitVec {
        BitVec::from_bits(bits.iter().copied())
    }

    #[test]
    fn bitvec_basics() {
        let mut v = BitVec::new();
        assert!(v.is_empty());
        assert_eq!(v.max_bit(), None);
        v.set(3);
        v.set(200);
        assert!(v.get(3) && v.get(200) && !v.get(4));
        assert_eq!(v.count_ones(), 2);
        assert_eq!(v.max_bit(), Some(200));
        assert_eq!(v.min_bit(), Some(3));
        assert_eq!(v.ones().collect::<Vec<_>>(), vec![3, 200]);
        v.clear(200);
        assert_eq!(v, bv(&[3]));
        v.flip(3);
        assert!(v.is_empty());
    }

    #[test]
    fn bitvec_equality_ignores_capacity() {
        let mut a = BitVec::new();
        a.set(100);
        a.clear(100);
        assert_eq!(a, BitVec::new());
        let mut b = bv(&[1, 70]);
        b.xor_assign(&bv(&[70]));
        assert_eq!(b, bv(&[1]));
    }

    #[test]
    fn rank_examples() {
        assert_eq!(rank(&Z2Matrix::identity(3)), 3);
        let zero = Z2Matrix::with_columns(4, vec![BitVec::new(), BitVec::new()]);
        assert_eq!(rank(&zero), 0);
        let dup = Z2Matrix::with_columns(2, vec![bv(&[0, 1]), bv(&[0, 1])]);
        assert_eq!(rank(&dup), 1);
    }

    #[test]
    fn solve_examples() {
        let m = Z2Matrix::with_columns(3, vec![bv(&[0, 1]), bv(&[1, 2])]);
        assert_eq!(solve_in_span(&m, &bv(&[0, 2])), Some(bv(&[0, 1])));
        assert_eq!(solve_in_span(&m, &BitVec::new()), Some(BitVec::new()));
        let m2 = Z2Matrix::with_columns(3, vec![bv(&[0])]);
        assert_eq!(solve_in_span(&m2, &bv(&[1])), None);
    }

    #[test]
    fn col_reduce_examples() {
        let (r, log) = col_reduce(&Z2Matrix::identity(3));
        assert_eq!(r, Z2Matrix::identity(3));
        assert!(log.is_empty());

        let m = Z2Matrix::with_columns(2, vec![bv(&[0, 1]), bv(&[0, 1])]);
        let (r, log) = col_reduce(&m);
        assert_eq!(r.col(0), &bv(&[0, 1]));
        assert!(r.col(1).is_empty());
        assert_eq!(log, vec![ColOp { src: 0, dst: 1 }]);

        let (r, log) = col_reduce(&Z2Matrix::new(0));
        assert_eq!(r.num_cols(), 0);
        assert!(log.is_empty());
    }

    #[test]
    fn col_reduce_pivots_unique() {
        let m = Z2Matrix::with_columns(
            4,
            vec![bv(&[0, 1, 3]), bv(&[1, 3]), bv(&[0, 2, 3]), bv(&[2])],
        );
        let (r, log) = col_reduce(&m);
        let mut pivots = Vec::new();
        for c in r.cols() {
            if let Some(p) = c.max_bit() {
                assert!(!pivots.contains(&p));
                pivots.push(p);
            }
        }
        for op in &log {
            assert!(op.src < op.dst);
        }
    }

    #[test]
    fn echelon_reduce_tracks_carries() {
        let mut e = Echelon::new();
        let (r, c) = e.reduce(&bv(&[0, 1]), BitVec::singleton(10));
        e.insert_reduced(r, c);
        let (r, c) = e.reduce(&bv(&[1, 2]), BitVec::singleton(11));
        // Full reduction folded the first column in: the stored value is the
        // canonical form and the carry remembers both sources.
        assert_eq!(r, bv(&[0, 2]));
        assert_eq!(c, bv(&[10, 11]));
        e.insert_reduced(r, c);
        assert_eq!(e.len(), 2);
        assert_eq!(e.with_carry_bit(10), vec![0, 1]);
        // Reducing the sum of both original vectors uses both columns.
        let (r, carry) = e.reduce(&bv(&[0, 2]), BitVec::new());
        assert!(r.is_empty());
        assert_eq!(carry, bv(&[10, 11]));
    }

    #[test]
    fn echelon_fold_and_remove_shrinks_span() {
        let mut e = Echelon::new();
        for (bits, tag) in [(vec![0usize, 1], 10), (vec![1, 2], 11), (vec![2, 3], 12)] {
            let (r, c) = e.reduce(&bv(&bits), BitVec::singleton(tag));
            e.insert_reduced(r, c);
        }
        // Fold column 0 into column 2 and drop it.
        e.fold_and_remove(0, &[2]);
        assert_eq!(e.len(), 2);
        // Column 2's carry absorbed column 0's tag.
        assert_eq!(e.with_carry_bit(10).len(), 1);
        // The removed direction is no longer spanned...
        let (r, _) = e.reduce(&bv(&[0, 1]), BitVec::new());
        assert!(!r.is_empty());
        // ...but the folded combination still is.
        let (r, _) = e.reduce(&bv(&[0, 1, 2, 3]), BitVec::new());
        assert!(r.is_empty());
    }

    proptest! {
        #[test]
        fn reduction_preserves_rank_and_span(cols in proptest::collection::vec(
            proptest::collection::vec(any::<bool>(), 6), 0..8)) {
            let rows = 6;
            let m = Z2Matrix::with_columns(rows, cols.iter().map(|c| {
                BitVec::from_bits(c.iter().enumerate().filter(|(_, b)| **b).map(|(i, _)| i))
            }).collect());
            let (r, log) = col_reduce(&m);
            prop_assert_eq!(rank(&m), rank(&r));
            // Replaying the log on the original matrix reproduces the reduction.
            let mut replay = m.clone();
            for op in &log {
                let src = replay.col(op.src).clone();
                replay.cols[op.dst].xor_assign(&src);
            }
            prop_assert_eq!(&replay, &r);
            // Every original column is in the span of the reduced matrix.
            for c in m.cols() {
                prop_assert!(solve_in_span(&r, c).is_some());
            }
        }

        #[test]
        fn solve_round_trips(cols in proptest::collection::vec(
            proptest::collection::vec(any::<bool>(), 5), 1..7),
            pick in proptest::collection::vec(any::<bool>(), 7)) {
            let m = Z2Matrix::with_columns(5, cols.iter().map(|c| {
                BitVec::from_bits(c.iter().enumerate().filter(|(_, b)| **b).map(|(i, _)| i))
            }).collect());
            let x = BitVec::from_bits(
                pick.iter().enumerate().take(m.num_cols()).filter(|(_, b)| **b).map(|(i, _)| i));
            let b = m.apply(&x);
            let solved = solve_in_span(&m, &b);
            prop_assert!(solved.is_some());
            prop_assert_eq!(m.apply(&solved.unwrap()), b);
        }

        #[test]
        fn reduction_is_deterministic(cols in proptest::collection::vec(
            proptest::collection::vec(any::<bool>(), 6), 0..8)) {
            let m = Z2Matrix::with_columns(6, cols.iter().map(|c| {
                BitVec::from_bits(c.iter().enumerate().filter(|(_, b)| **b).map(|(i, _)| i))
            }).collect());
            prop_assert_eq!(col_reduce(&m), col_reduce(&m));
        }
    }
}
