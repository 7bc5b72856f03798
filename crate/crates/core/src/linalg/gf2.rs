use std::fmt;

use crate::complex::{Face, MAX_VERTICES};
use crate::error::{Error, Result};

/// Fixed-length bit vector over GF(2).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitVec {
    words: Vec<u64>,
    len: usize,
}

impl BitVec {
    pub fn zeros(len: usize) -> Self {
        BitVec { words: vec![0; len.div_ceil(64)], len }
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        let mut v = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b {
                v.set(i, true);
            }
        }
        v
    }

    pub fn from_face(f: Face, len: usize) -> Self {
        let mut v = Self::zeros(len);
        for i in f.iter().filter(|&i| i < len) {
            v.set(i, true);
        }
        v
    }

    /// The support as a face; requires `len ≤ 128`.
    pub fn to_face(&self) -> Face {
        debug_assert!(self.len <= MAX_VERTICES);
        let lo = self.words.first().copied().unwrap_or(0) as u128;
        let hi = self.words.get(1).copied().unwrap_or(0) as u128;
        Face(lo | hi << 64)
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> bool {
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn set(&mut self, i: usize, b: bool) {
        let mask = 1u64 << (i % 64);
        if b {
            self.words[i / 64] |= mask;
        } else {
            self.words[i / 64] &= !mask;
        }
    }

    pub fn xor_assign(&mut self, other: &BitVec) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn first_one(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(k, w)| k * 64 + w.trailing_zeros() as usize)
    }

    /// Parity of the inner product.
    pub fn dot(&self, other: &BitVec) -> bool {
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones())
            .sum::<u32>()
            % 2
            == 1
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(move |&i| self.get(i))
    }
}

impl fmt::Debug for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            write!(f, "{}", u8::from(self.get(i)))?;
        }
        Ok(())
    }
}

/// Dense matrix over GF(2), stored by rows.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Gf2Matrix {
    rows: Vec<BitVec>,
    cols: usize,
}

impl Gf2Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Gf2Matrix { rows: vec![BitVec::zeros(cols); rows], cols }
    }

    pub fn from_bitvecs(rows: Vec<BitVec>, cols: usize) -> Result<Self> {
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::invalid("matrix rows have different lengths"));
        }
        Ok(Gf2Matrix { rows, cols })
    }

    /// From 0/1 integer rows; anything else is rejected.
    pub fn from_rows(rows: &[Vec<u8>]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.len());
        let mut out = Vec::with_capacity(rows.len());
        for (i, r) in rows.iter().enumerate() {
            if r.len() != cols {
                return Err(Error::invalid(format!(
                    "row {} has {} entries, expected {cols}",
                    i + 1,
                    r.len()
                )));
            }
            let mut v = BitVec::zeros(cols);
            for (j, &x) in r.iter().enumerate() {
                match x {
                    0 => {}
                    1 => v.set(j, true),
                    _ => {
                        return Err(Error::invalid(format!(
                            "entry ({}, {}) is {x}, expected 0 or 1",
                            i + 1,
                            j + 1
                        )))
                    }
                }
            }
            out.push(v);
        }
        Ok(Gf2Matrix { rows: out, cols })
    }

    pub fn to_rows(&self) -> Vec<Vec<u8>> {
        self.rows
            .iter()
            .map(|r| (0..self.cols).map(|j| u8::from(r.get(j))).collect())
            .collect()
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn num_cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &BitVec {
        &self.rows[i]
    }

    pub fn rows(&self) -> &[BitVec] {
        &self.rows
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.rows[i].get(j)
    }

    pub fn set(&mut self, i: usize, j: usize, b: bool) {
        self.rows[i].set(j, b);
    }

    /// Column `j` as a bit vector indexed by rows.
    pub fn column(&self, j: usize) -> BitVec {
        let mut v = BitVec::zeros(self.rows.len());
        for (i, r) in self.rows.iter().enumerate() {
            if r.get(j) {
                v.set(i, true);
            }
        }
        v
    }

    /// The submatrix on the columns listed in `cols`.
    pub fn select_columns(&self, cols: &[usize]) -> Gf2Matrix {
        let rows = self
            .rows
            .iter()
            .map(|r| {
                let mut v = BitVec::zeros(cols.len());
                for (k, &j) in cols.iter().enumerate() {
                    if r.get(j) {
                        v.set(k, true);
                    }
                }
                v
            })
            .collect();
        Gf2Matrix { rows, cols: cols.len() }
    }

    /// Reduced row echelon form (zero rows dropped) and its pivot columns.
    pub fn rref(&self) -> (Vec<BitVec>, Vec<usize>) {
        let mut rows = self.rows.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            let Some(p) = (r..rows.len()).find(|&i| rows[i].get(c)) else {
                continue;
            };
            rows.swap(r, p);
            let pivot = rows[r].clone();
            for (i, row) in rows.iter_mut().enumerate() {
                if i != r && row.get(c) {
                    row.xor_assign(&pivot);
                }
            }
            pivots.push(c);
            r += 1;
            if r == rows.len() {
                break;
            }
        }
        rows.truncate(r);
        (rows, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of `{x : A x = 0}`.
    pub fn kernel_basis(&self) -> Vec<BitVec> {
        let (rows, pivots) = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|&j| !is_pivot[j]) {
            let mut x = BitVec::zeros(self.cols);
            x.set(free, true);
            for (row, &p) in rows.iter().zip(&pivots) {
                if row.get(free) {
                    x.set(p, true);
                }
            }
            basis.push(x);
        }
        basis
    }

    /// Whether `v` lies in the row space.
    pub fn in_row_space(&self, v: &BitVec) -> bool {
        let (rows, pivots) = self.rref();
        let mut w = v.clone();
        for (row, &p) in rows.iter().zip(&pivots) {
            if w.get(p) {
                w.xor_assign(row);
            }
        }
        w.is_zero()
    }

    /// Row-space membership by the chosen method; both always agree.
    pub fn in_row_space_by(&self, v: &BitVec, method: Membership) -> bool {
        match method {
            Membership::Span => self.in_row_space(v),
            Membership::Parity => self.kernel_basis().iter().all(|x| !x.dot(v)),
        }
    }

    /// `None` if `v` is in the row space; otherwise a kernel vector `x` with
    /// `⟨v, x⟩ = 1`, which certifies that `v` is not.
    pub fn row_space_witness(&self, v: &BitVec) -> Option<BitVec> {
        self.kernel_basis().into_iter().find(|x| x.dot(v))
    }

    /// All `2^rank` vectors of the row space as faces, in Gray-code order
    /// starting from the zero vector. Requires at most 128 columns.
    pub fn row_space_faces(&self) -> RowSpaceIter {
        debug_assert!(self.cols <= MAX_VERTICES);
        let (rows, _) = self.rref();
        let basis: Vec<u128> = rows.iter().map(|r| r.to_face().0).collect();
        RowSpaceIter { basis, counter: 0, current: 0, done: false }
    }
}

/// How [`Gf2Matrix::in_row_space_by`] decides membership.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Membership {
    /// Reduce against an echelon basis of the rows.
    Span,
    /// Check that `v` pairs evenly with every kernel basis vector.
    Parity,
}

/// The set of positions where `v` is one.
pub fn phi(v: &BitVec) -> Face {
    v.to_face()
}

/// Indicator vector of length `m` of a subset of `[m]`.
pub fn phi_inv(omega: Face, m: usize) -> BitVec {
    BitVec::from_face(omega, m)
}

/// Gray-code enumeration of a GF(2) span.
pub struct RowSpaceIter {
    basis: Vec<u128>,
    counter: u64,
    current: u128,
    done: bool,
}

impl Iterator for RowSpaceIter {
    type Item = Face;

    fn next(&mut self) -> Option<Face> {
        if self.done {
            return None;
        }
        let out = Face(self.current);
        self.counter += 1;
        let bit = self.counter.trailing_zeros() as usize;
        if bit >= self.basis.len() {
            self.done = true;
        } else {
            self.current ^= self.basis[bit];
        }
        Some(out)
    }
}
