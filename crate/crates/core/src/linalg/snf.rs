use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Integer matrix in row-major sparse form.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SparseMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Vec<(usize, i64)>>,
}

impl SparseMatrix {
    pub fn new(rows: usize, cols: usize) -> Self {
        SparseMatrix { rows, cols, entries: vec![Vec::new(); rows] }
    }

    /// Add `value` to entry `(i, j)`.
    pub fn add(&mut self, i: usize, j: usize, value: i64) {
        debug_assert!(i < self.rows && j < self.cols);
        if value == 0 {
            return;
        }
        let row = &mut self.entries[i];
        match row.binary_search_by_key(&j, |e| e.0) {
            Ok(k) => {
                row[k].1 += value;
                if row[k].1 == 0 {
                    row.remove(k);
                }
            }
            Err(k) => row.insert(k, (j, value)),
        }
    }

    /// Set a whole row from `(column, value)` pairs with distinct columns.
    pub fn set_row(&mut self, i: usize, mut row: Vec<(usize, i64)>) {
        row.retain(|e| e.1 != 0);
        row.sort_unstable_by_key(|e| e.0);
        self.entries[i] = row;
    }

    pub fn from_dense(a: &[Vec<i64>]) -> Self {
        let cols = a.first().map_or(0, |r| r.len());
        let mut m = SparseMatrix::new(a.len(), cols);
        for (i, r) in a.iter().enumerate() {
            m.set_row(i, r.iter().enumerate().map(|(j, &x)| (j, x)).collect());
        }
        m
    }

    pub fn num_rows(&self) -> usize {
        self.rows
    }

    pub fn num_cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.entries.iter().map(Vec::len).sum()
    }

    pub fn row(&self, i: usize) -> &[(usize, i64)] {
        &self.entries[i]
    }

    pub fn to_dense(&self) -> Vec<Vec<i64>> {
        let mut out = vec![vec![0; self.cols]; self.rows];
        for (i, r) in self.entries.iter().enumerate() {
            for &(j, x) in r {
                out[i][j] = x;
            }
        }
        out
    }

    /// `self · other`, used by tests to check that consecutive maps compose to zero.
    pub fn mul(&self, other: &SparseMatrix) -> SparseMatrix {
        assert_eq!(self.cols, other.rows);
        let mut out = SparseMatrix::new(self.rows, other.cols);
        for (i, r) in self.entries.iter().enumerate() {
            for &(k, x) in r {
                for &(j, y) in &other.entries[k] {
                    out.add(i, j, x * y);
                }
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Vec::is_empty)
    }
}

/// Rank and the invariant factors greater than one, ascending.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct IntegerInvariants {
    pub rank: usize,
    pub torsion: Vec<BigInt>,
}

/// Smith normal form `U · A · V = D` with unimodular `U`, `V`.
#[derive(Clone, Debug)]
pub struct SmithForm {
    /// Diagonal of `D`, length `min(rows, cols)`, non-negative, each entry
    /// dividing the next nonzero one.
    pub diagonal: Vec<BigInt>,
    pub u: Vec<Vec<BigInt>>,
    pub v: Vec<Vec<BigInt>>,
}

fn identity(n: usize) -> Vec<Vec<BigInt>> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect()
}

struct Dense {
    a: Vec<Vec<BigInt>>,
    rows: usize,
    cols: usize,
    u: Option<Vec<Vec<BigInt>>>,
    v: Option<Vec<Vec<BigInt>>>,
}

impl Dense {
    fn swap_rows(&mut self, i: usize, k: usize) {
        self.a.swap(i, k);
        if let Some(u) = &mut self.u {
            u.swap(i, k);
        }
    }

    fn swap_cols(&mut self, j: usize, k: usize) {
        for r in &mut self.a {
            r.swap(j, k);
        }
        if let Some(v) = &mut self.v {
            for r in v {
                r.swap(j, k);
            }
        }
    }

    /// row_t -= q · row_s
    fn row_sub(&mut self, t: usize, s: usize, q: &BigInt) {
        let src = self.a[s].clone();
        for (x, y) in self.a[t].iter_mut().zip(&src) {
            if !y.is_zero() {
                *x -= q * y;
            }
        }
        if let Some(u) = &mut self.u {
            let src = u[s].clone();
            for (x, y) in u[t].iter_mut().zip(&src) {
                if !y.is_zero() {
                    *x -= q * y;
                }
            }
        }
    }

    /// col_t -= q · col_s
    fn col_sub(&mut self, t: usize, s: usize, q: &BigInt) {
        for r in &mut self.a {
            if !r[s].is_zero() {
                let d = q * &r[s];
                r[t] -= d;
            }
        }
        if let Some(v) = &mut self.v {
            for r in v {
                if !r[s].is_zero() {
                    let d = q * &r[s];
                    r[t] -= d;
                }
            }
        }
    }

    fn negate_row(&mut self, t: usize) {
        for x in &mut self.a[t] {
            *x = -&*x;
        }
        if let Some(u) = &mut self.u {
            for x in &mut u[t] {
                *x = -&*x;
            }
        }
    }

    fn min_entry(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        for i in t..self.rows {
            for j in t..self.cols {
                let x = &self.a[i][j];
                if x.is_zero() {
                    continue;
                }
                if best.is_none_or(|(bi, bj)| x.abs() < self.a[bi][bj].abs()) {
                    best = Some((i, j));
                    if x.abs().is_one() {
                        return best;
                    }
                }
            }
        }
        best
    }

    fn run(&mut self) -> Vec<BigInt> {
        let n = self.rows.min(self.cols);
        let mut t = 0;
        while t < n {
            let Some((i, j)) = self.min_entry(t) else { break };
            self.swap_rows(t, i);
            self.swap_cols(t, j);
            loop {
                let mut clean = true;
                for i in t + 1..self.rows {
                    if self.a[i][t].is_zero() {
                        continue;
                    }
                    let q = self.a[i][t].div_floor(&self.a[t][t]);
                    self.row_sub(i, t, &q);
                    if !self.a[i][t].is_zero() {
                        clean = false;
                    }
                }
                for j in t + 1..self.cols {
                    if self.a[t][j].is_zero() {
                        continue;
                    }
                    let q = self.a[t][j].div_floor(&self.a[t][t]);
                    self.col_sub(j, t, &q);
                    if !self.a[t][j].is_zero() {
                        clean = false;
                    }
                }
                if !clean {
                    // move the smallest remaining entry of row t / column t to the pivot
                    let mut best = (t, t);
                    for i in t + 1..self.rows {
                        let x = &self.a[i][t];
                        if !x.is_zero() && x.abs() < self.a[best.0][best.1].abs() {
                            best = (i, t);
                        }
                    }
                    for j in t + 1..self.cols {
                        let x = &self.a[t][j];
                        if !x.is_zero() && x.abs() < self.a[best.0][best.1].abs() {
                            best = (t, j);
                        }
                    }
                    self.swap_rows(t, best.0);
                    self.swap_cols(t, best.1);
                    continue;
                }
                if self.a[t][t].abs().is_one() {
                    break;
                }
                let p = self.a[t][t].clone();
                let bad = (t + 1..self.rows)
                    .find(|&i| (t + 1..self.cols).any(|j| !self.a[i][j].is_multiple_of(&p)));
                match bad {
                    Some(i) => self.row_sub(t, i, &BigInt::from(-1)),
                    None => break,
                }
            }
            if self.a[t][t].is_negative() {
                self.negate_row(t);
            }
            t += 1;
        }
        (0..n).map(|k| self.a[k][k].clone()).collect()
    }
}

/// Smith normal form of a dense integer matrix, with transforms.
pub fn smith_normal_form(a: &[Vec<BigInt>]) -> SmithForm {
    let rows = a.len();
    let cols = a.first().map_or(0, |r| r.len());
    let mut d = Dense { a: a.to_vec(), rows, cols, u: Some(identity(rows)), v: Some(identity(cols)) };
    let diagonal = d.run();
    SmithForm { diagonal, u: d.u.unwrap(), v: d.v.unwrap() }
}

fn dense_invariants(a: Vec<Vec<BigInt>>) -> Vec<BigInt> {
    let rows = a.len();
    let cols = a.first().map_or(0, |r| r.len());
    let mut d = Dense { a, rows, cols, u: None, v: None };
    d.run().into_iter().filter(|x| !x.is_zero()).collect()
}

/// Rank over ℚ: the number of nonzero Smith diagonal entries.
pub fn rational_rank(a: &SparseMatrix) -> usize {
    invariant_factors(a).rank
}

/// Rank and nontrivial invariant factors of a sparse integer matrix.
///
/// Unit pivots are eliminated in sparse form first (checked `i64`
/// arithmetic); whatever remains is handed to a dense big-integer Smith form.
pub fn invariant_factors(a: &SparseMatrix) -> IntegerInvariants {
    let mut rows: Vec<Vec<(usize, i64)>> = a.entries.clone();
    let mut col_rows: Vec<HashSet<usize>> = vec![HashSet::new(); a.cols];
    for (i, r) in rows.iter().enumerate() {
        for &(j, _) in r {
            col_rows[j].insert(i);
        }
    }
    let mut row_alive = vec![true; a.rows];
    let mut col_alive = vec![true; a.cols];
    let mut rank = 0usize;
    let mut heap: BinaryHeap<Reverse<(usize, usize)>> =
        (0..a.cols).filter(|&j| !col_rows[j].is_empty()).map(|j| Reverse((col_rows[j].len(), j))).collect();

    'outer: while let Some(Reverse((count, c))) = heap.pop() {
        if !col_alive[c] || col_rows[c].is_empty() {
            continue;
        }
        if count != col_rows[c].len() {
            heap.push(Reverse((col_rows[c].len(), c)));
            continue;
        }
        let pivot_row = col_rows[c]
            .iter()
            .copied()
            .filter(|&i| row_value(&rows[i], c).is_some_and(|x| x.abs() == 1))
            .min_by_key(|&i| (rows[i].len(), i));
        let Some(r) = pivot_row else { continue };
        let s = row_value(&rows[r], c).unwrap();
        let pivot = rows[r].clone();
        let targets: Vec<usize> = col_rows[c].iter().copied().filter(|&i| i != r).collect();
        let mut updates = Vec::with_capacity(targets.len());
        for &i in &targets {
            let x = row_value(&rows[i], c).unwrap();
            // row_i -= (x / s) · pivot, with s = ±1
            match axpy(&rows[i], &pivot, x * s) {
                Some(new_row) => updates.push((i, new_row)),
                // overflow: leave the rest to the big-integer phase
                None => break 'outer,
            }
        }
        for (i, new_row) in updates {
            for &(j, _) in &rows[i] {
                col_rows[j].remove(&i);
            }
            for &(j, _) in &new_row {
                col_rows[j].insert(i);
                if col_alive[j] && j != c {
                    heap.push(Reverse((col_rows[j].len(), j)));
                }
            }
            rows[i] = new_row;
        }
        for &(j, _) in &pivot {
            col_rows[j].remove(&r);
            if j != c && col_alive[j] {
                heap.push(Reverse((col_rows[j].len(), j)));
            }
        }
        rows[r].clear();
        row_alive[r] = false;
        col_alive[c] = false;
        rank += 1;
    }

    let live_cols: Vec<usize> = (0..a.cols).filter(|&j| col_alive[j] && !col_rows[j].is_empty()).collect();
    let mut col_index = vec![usize::MAX; a.cols];
    for (k, &j) in live_cols.iter().enumerate() {
        col_index[j] = k;
    }
    let dense: Vec<Vec<BigInt>> = (0..a.rows)
        .filter(|&i| row_alive[i] && !rows[i].is_empty())
        .map(|i| {
            let mut r = vec![BigInt::zero(); live_cols.len()];
            for &(j, x) in &rows[i] {
                r[col_index[j]] = BigInt::from(x);
            }
            r
        })
        .collect();
    let mut torsion = Vec::new();
    for d in dense_invariants(dense) {
        rank += 1;
        if !d.is_one() {
            torsion.push(d);
        }
    }
    torsion.sort();
    IntegerInvariants { rank, torsion }
}

fn row_value(row: &[(usize, i64)], j: usize) -> Option<i64> {
    row.binary_search_by_key(&j, |e| e.0).ok().map(|k| row[k].1)
}

/// `a - q · b` on sorted sparse rows; `None` on overflow.
fn axpy(a: &[(usize, i64)], b: &[(usize, i64)], q: i64) -> Option<Vec<(usize, i64)>> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut k) = (0, 0);
    while i < a.len() || k < b.len() {
        let ja = a.get(i).map_or(usize::MAX, |e| e.0);
        let jb = b.get(k).map_or(usize::MAX, |e| e.0);
        if ja < jb {
            out.push(a[i]);
            i += 1;
        } else {
            let t = q.checked_mul(b[k].1)?;
            let v = if ja == jb {
                let v = a[i].1.checked_sub(t)?;
                i += 1;
                v
            } else {
                t.checked_neg()?
            };
            if v != 0 {
                out.push((jb, v));
            }
            k += 1;
        }
    }
    Some(out)
}
