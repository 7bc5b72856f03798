use std::fmt::Debug;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// A field with exact arithmetic.
pub trait Field: Clone + Send + Sync {
    type Elem: Clone + PartialEq + Debug + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_i64(&self, x: i64) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    /// Multiplicative inverse; `a` must be nonzero.
    fn inv(&self, a: &Self::Elem) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;

    /// Reduced row echelon form in place; returns the pivot columns.
    fn rref(&self, rows: &mut Vec<Vec<Self::Elem>>) -> Vec<usize> {
        let cols = rows.first().map_or(0, |r| r.len());
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..cols {
            if r == rows.len() {
                break;
            }
            let Some(p) = (r..rows.len()).find(|&i| !self.is_zero(&rows[i][c])) else {
                continue;
            };
            rows.swap(r, p);
            let inv = self.inv(&rows[r][c]);
            for x in rows[r].iter_mut() {
                *x = self.mul(x, &inv);
            }
            let pivot = rows[r].clone();
            for (i, row) in rows.iter_mut().enumerate() {
                if i == r || self.is_zero(&row[c]) {
                    continue;
                }
                let f = row[c].clone();
                for (x, y) in row.iter_mut().zip(&pivot) {
                    if !self.is_zero(y) {
                        *x = self.sub(x, &self.mul(&f, y));
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        rows.truncate(r);
        pivots
    }

    fn rank(&self, rows: &[Vec<Self::Elem>]) -> usize {
        let mut m = rows.to_vec();
        self.rref(&mut m).len()
    }

    /// Basis of `{x : A x = 0}` for `A` with `cols` columns.
    fn kernel_basis(&self, rows: &[Vec<Self::Elem>], cols: usize) -> Vec<Vec<Self::Elem>> {
        let mut m = rows.to_vec();
        let pivots = self.rref(&mut m);
        let mut is_pivot = vec![false; cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        (0..cols)
            .filter(|&j| !is_pivot[j])
            .map(|free| {
                let mut x = vec![self.zero(); cols];
                x[free] = self.one();
                for (row, &p) in m.iter().zip(&pivots) {
                    x[p] = self.neg(&row[free]);
                }
                x
            })
            .collect()
    }

    /// Some `x` with `A x = b`, if one exists.
    fn solve(&self, rows: &[Vec<Self::Elem>], b: &[Self::Elem]) -> Option<Vec<Self::Elem>> {
        let cols = rows.first().map_or(0, |r| r.len());
        let mut aug: Vec<Vec<Self::Elem>> = rows
            .iter()
            .zip(b)
            .map(|(r, y)| {
                let mut v = r.clone();
                v.push(y.clone());
                v
            })
            .collect();
        if rows.is_empty() {
            return Some(Vec::new());
        }
        let pivots = self.rref(&mut aug);
        if pivots.last() == Some(&cols) {
            return None;
        }
        let mut x = vec![self.zero(); cols];
        for (row, &p) in aug.iter().zip(&pivots) {
            x[p] = row[cols].clone();
        }
        Some(x)
    }
}

/// The rationals.
#[derive(Clone, Copy, Debug, Default)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn from_i64(&self, x: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(x))
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn inv(&self, a: &BigRational) -> BigRational {
        a.recip()
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
}

/// The prime field `𝔽_p`.
#[derive(Clone, Copy, Debug)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    /// `p` must be prime and below `2^32`.
    pub fn new(p: u64) -> Self {
        assert!((2..1 << 32).contains(&p) && is_prime(p), "{p} is not a supported prime");
        PrimeField { p }
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

impl Field for PrimeField {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1
    }
    fn from_i64(&self, x: i64) -> u64 {
        x.rem_euclid(self.p as i64) as u64
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        (a + b) % self.p
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        (a + self.p - b) % self.p
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        a * b % self.p
    }
    fn neg(&self, a: &u64) -> u64 {
        (self.p - a) % self.p
    }
    fn inv(&self, a: &u64) -> u64 {
        // Fermat
        let (mut base, mut e, mut acc) = (*a % self.p, self.p - 2, 1u64);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % self.p;
            }
            base = base * base % self.p;
            e >>= 1;
        }
        acc
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
}
