//! Dense linear algebra over GF(2).
//!
//! Rows are packed into `u64` words. All eliminations pivot on the lowest
//! available column so that results are reproducible across runs.

use std::fmt;

const WORD: usize = 64;

/// A fixed-length bit vector.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitRow {
    len: usize,
    words: Vec<u64>,
}

impl BitRow {
    pub fn zeros(len: usize) -> Self {
        Self {
            len,
            words: vec![0; len.div_ceil(WORD)],
        }
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(len: usize, indices: I) -> Self {
        let mut row = Self::zeros(len);
        for i in indices {
            row.set(i, true);
        }
        row
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        Self::from_indices(
            bits.len(),
            bits.iter().enumerate().filter(|(_, b)| **b).map(|(i, _)| i),
        )
    }

    /// Parses a string of `0`/`1` characters.
    pub fn parse01(s: &str) -> Option<Self> {
        let mut row = Self::zeros(s.len());
        for (i, c) in s.chars().enumerate() {
            match c {
                '0' => {}
                '1' => row.set(i, true),
                _ => return None,
            }
        }
        Some(row)
    }

    pub fn to_01(&self) -> String {
        (0..self.len)
            .map(|i| if self.get(i) { '1' } else { '0' })
            .collect()
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        (self.words[i / WORD] >> (i % WORD)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        let mask = 1u64 << (i % WORD);
        if value {
            self.words[i / WORD] |= mask;
        } else {
            self.words[i / WORD] &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        assert!(i < self.len);
        self.words[i / WORD] ^= 1u64 << (i % WORD);
    }

    pub fn xor_assign(&mut self, other: &BitRow) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= *b;
        }
    }

    pub fn xor(&self, other: &BitRow) -> BitRow {
        let mut out = self.clone();
        out.xor_assign(other);
        out
    }

    pub fn and(&self, other: &BitRow) -> BitRow {
        debug_assert_eq!(self.len, other.len);
        BitRow {
            len: self.len,
            words: self
                .words
                .iter()
                .zip(&other.words)
                .map(|(a, b)| a & b)
                .collect(),
        }
    }

    pub fn and_assign(&mut self, other: &BitRow) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= *b;
        }
    }

    pub fn or(&self, other: &BitRow) -> BitRow {
        BitRow {
            len: self.len,
            words: self
                .words
                .iter()
                .zip(&other.words)
                .map(|(a, b)| a | b)
                .collect(),
        }
    }

    /// Number of set bits in `self & other`.
    pub fn and_count(&self, other: &BitRow) -> usize {
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    /// Inner product over GF(2).
    #[inline]
    pub fn dot(&self, other: &BitRow) -> bool {
        self.and_count(other) % 2 == 1
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|w| *w == 0)
    }

    pub fn is_subset_of(&self, other: &BitRow) -> bool {
        self.words
            .iter()
            .zip(&other.words)
            .all(|(a, b)| a & !b == 0)
    }

    pub fn first_one(&self) -> Option<usize> {
        for (wi, w) in self.words.iter().enumerate() {
            if *w != 0 {
                return Some(wi * WORD + w.trailing_zeros() as usize);
            }
        }
        None
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let t = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(wi * WORD + t)
                }
            })
        })
    }

    /// Concatenates `self` followed by `other`.
    pub fn concat(&self, other: &BitRow) -> BitRow {
        let mut out = BitRow::zeros(self.len + other.len);
        for i in self.ones() {
            out.set(i, true);
        }
        for i in other.ones() {
            out.set(self.len + i, true);
        }
        out
    }

    /// Copies bits `[start, start + len)` into a new row.
    pub fn slice(&self, start: usize, len: usize) -> BitRow {
        BitRow::from_indices(
            len,
            self.ones()
                .filter(|&i| i >= start && i < start + len)
                .map(|i| i - start),
        )
    }

    /// Low 64 bits as an integer mask. Only meaningful when `len <= 64`.
    pub fn to_u64(&self) -> u64 {
        self.words.first().copied().unwrap_or(0)
    }
}

impl fmt::Debug for BitRow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitRow({})", self.to_01())
    }
}

/// A matrix over GF(2) stored as a list of rows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BitMatrix {
    cols: usize,
    rows: Vec<BitRow>,
}

/// Row echelon data: reduced rows and their pivot columns, ascending.
#[derive(Clone, Debug)]
pub struct Echelon {
    pub rows: Vec<BitRow>,
    pub pivots: Vec<usize>,
}

impl Echelon {
    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduces `v` against the echelon rows; returns the residue.
    pub fn reduce(&self, v: &BitRow) -> BitRow {
        let mut v = v.clone();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if v.get(p) {
                v.xor_assign(row);
            }
        }
        v
    }

    pub fn contains(&self, v: &BitRow) -> bool {
        self.reduce(v).is_zero()
    }
}

impl BitMatrix {
    pub fn new(cols: usize) -> Self {
        Self {
            cols,
            rows: Vec::new(),
        }
    }

    pub fn from_rows(cols: usize, rows: Vec<BitRow>) -> Self {
        assert!(rows.iter().all(|r| r.len() == cols), "row length mismatch");
        Self { cols, rows }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_rows(n, (0..n).map(|i| BitRow::from_indices(n, [i])).collect())
    }

    pub fn push(&mut self, row: BitRow) {
        assert_eq!(row.len(), self.cols);
        self.rows.push(row);
    }

    pub fn rows(&self) -> &[BitRow] {
        &self.rows
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn num_cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.rows[r].get(c)
    }

    pub fn transpose(&self) -> BitMatrix {
        let mut out: Vec<BitRow> = (0..self.cols)
            .map(|_| BitRow::zeros(self.rows.len()))
            .collect();
        for (r, row) in self.rows.iter().enumerate() {
            for c in row.ones() {
                out[c].set(r, true);
            }
        }
        BitMatrix::from_rows(self.rows.len(), out)
    }

    /// `self * v` for a column vector `v`.
    pub fn mul_vec(&self, v: &BitRow) -> BitRow {
        BitRow::from_bools(&self.rows.iter().map(|r| r.dot(v)).collect::<Vec<_>>())
    }

    /// Reduced row echelon form with lowest-index pivots.
    pub fn echelon(&self) -> Echelon {
        let mut rows: Vec<BitRow> = Vec::new();
        let mut pivots: Vec<usize> = Vec::new();
        for row in &self.rows {
            let mut v = row.clone();
            for (r, &p) in rows.iter().zip(&pivots) {
                if v.get(p) {
                    v.xor_assign(r);
                }
            }
            if let Some(p) = v.first_one() {
                for r in rows.iter_mut() {
                    if r.get(p) {
                        r.xor_assign(&v);
                    }
                }
                let at = pivots.partition_point(|&q| q < p);
                pivots.insert(at, p);
                rows.insert(at, v);
            }
        }
        Echelon { rows, pivots }
    }

    pub fn rank(&self) -> usize {
        self.echelon().rank()
    }

    /// Basis of `{x : self * x = 0}`.
    pub fn nullspace(&self) -> Vec<BitRow> {
        let ech = self.echelon();
        let mut is_pivot = vec![false; self.cols];
        for &p in &ech.pivots {
            is_pivot[p] = true;
        }
        (0..self.cols)
            .filter(|&c| !is_pivot[c])
            .map(|free| {
                let mut x = BitRow::zeros(self.cols);
                x.set(free, true);
                for (row, &p) in ech.rows.iter().zip(&ech.pivots) {
                    if row.get(free) {
                        x.set(p, true);
                    }
                }
                x
            })
            .collect()
    }

    /// Particular solution of `self * x = b` with free variables set to zero,
    /// or `None` if the system is inconsistent.
    pub fn solve(&self, b: &BitRow) -> Option<BitRow> {
        assert_eq!(b.len(), self.rows.len());
        // Augment each row with its right-hand side bit in an extra column.
        let aug: Vec<BitRow> = self
            .rows
            .iter()
            .enumerate()
            .map(|(i, r)| r.concat(&BitRow::from_indices(1, if b.get(i) { vec![0] } else { vec![] })))
            .collect();
        let ech = BitMatrix::from_rows(self.cols + 1, aug).echelon();
        let mut x = BitRow::zeros(self.cols);
        for (row, &p) in ech.rows.iter().zip(&ech.pivots) {
            if p == self.cols {
                return None;
            }
            if row.get(self.cols) {
                x.set(p, true);
            }
        }
        Some(x)
    }

    /// Inverse of a square matrix, if it exists.
    pub fn inverse(&self) -> Option<BitMatrix> {
        let n = self.rows.len();
        if n != self.cols {
            return None;
        }
        if n == 0 {
            return Some(BitMatrix::new(0));
        }
        let aug: Vec<BitRow> = self
            .rows
            .iter()
            .enumerate()
            .map(|(i, r)| r.concat(&BitRow::from_indices(n, [i])))
            .collect();
        let ech = BitMatrix::from_rows(2 * n, aug).echelon();
        if ech.rank() < n || ech.pivots[n - 1] >= n {
            return None;
        }
        Some(BitMatrix::from_rows(
            n,
            ech.rows.iter().map(|r| r.slice(n, n)).collect(),
        ))
    }

    pub fn mul(&self, other: &BitMatrix) -> BitMatrix {
        assert_eq!(self.cols, other.rows.len());
        let rows = self
            .rows
            .iter()
            .map(|r| {
                let mut acc = BitRow::zeros(other.cols);
                for i in r.ones() {
                    acc.xor_assign(&other.rows[i]);
                }
                acc
            })
            .collect();
        BitMatrix::from_rows(other.cols, rows)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn mat(rows: &[&str]) -> BitMatrix {
        let rows: Vec<BitRow> = rows.iter().map(|s| BitRow::parse01(s).unwrap()).collect();
        BitMatrix::from_rows(rows[0].len(), rows)
    }

    #[test]
    fn hamming_rank_and_nullspace() {
        let h = mat(&["1010101", "0110011", "0001111"]);
        assert_eq!(h.rank(), 3);
        let ns = h.nullspace();
        assert_eq!(ns.len(), 4);
        for v in &ns {
            assert!(h.mul_vec(v).is_zero());
        }
    }

    #[test]
    fn solve_inconsistent() {
        let a = mat(&["11", "11"]);
        assert!(a.solve(&BitRow::parse01("10").unwrap()).is_none());
        let x = a.solve(&BitRow::parse01("11").unwrap()).unwrap();
        assert_eq!(a.mul_vec(&x), BitRow::parse01("11").unwrap());
    }

    #[test]
    fn singular_has_no_inverse() {
        assert!(mat(&["11", "11"]).inverse().is_none());
        let a = mat(&["11", "01"]);
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv), BitMatrix::identity(2));
    }

    #[test]
    fn ones_iterates_across_words() {
        let r = BitRow::from_indices(200, [0, 63, 64, 150, 199]);
        assert_eq!(r.ones().collect::<Vec<_>>(), vec![0, 63, 64, 150, 199]);
        assert_eq!(r.first_one(), Some(0));
        assert_eq!(r.slice(60, 10).ones().collect::<Vec<_>>(), vec![3, 4]);
    }

    fn arb_matrix() -> impl Strategy<Value = BitMatrix> {
        (1usize..8, 1usize..70).prop_flat_map(|(m, n)| {
            prop::collection::vec(prop::collection::vec(any::<bool>(), n), m).prop_map(move |rows| {
                BitMatrix::from_rows(n, rows.iter().map(|r| BitRow::from_bools(r)).collect())
            })
        })
    }

    proptest! {
        #[test]
        fn rank_nullity(a in arb_matrix()) {
            prop_assert_eq!(a.rank() + a.nullspace().len(), a.num_cols());
            for v in a.nullspace() {
                prop_assert!(a.mul_vec(&v).is_zero());
            }
        }

        #[test]
        fn solve_recovers_consistent_rhs(a in arb_matrix(), seed in any::<u64>()) {
            let x0 = BitRow::from_bools(&(0..a.num_cols()).map(|i| (seed >> (i % 64)) & 1 == 1).collect::<Vec<_>>());
            let b = a.mul_vec(&x0);
            let x = a.solve(&b).expect("consistent by construction");
            prop_assert_eq!(a.mul_vec(&x), b);
        }
    }
}
